# Spectral module: Eisenstein series, Selberg zeta function, trace-formula terms
