# CLI module: config loading, subcommands and reproducible reports
