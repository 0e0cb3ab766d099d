# Core module: hyperbolic geometry, special functions, shared errors
