# Lattice module: character sums over rank-2 lattices and their closed forms
