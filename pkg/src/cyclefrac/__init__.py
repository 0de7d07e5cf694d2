"""Exact generating polynomials of permutation families and the continued
fractions that enumerate them at lambda = +1 and -1."""

__version__ = "0.1.0"
