# Signals module: fits, spreads and series acceleration for numerical diagnostics
