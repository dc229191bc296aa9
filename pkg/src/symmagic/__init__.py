"""Nonstabilizerness of permutation-invariant qubit states."""

__version__ = "0.1.0"
