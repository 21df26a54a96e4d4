"""Exact Toeplitz-operator calculus on the Fock-Sobolev space F^{2,m}."""
