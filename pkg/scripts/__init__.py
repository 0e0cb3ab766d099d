# Scripts module: result aggregation
