"""Numerical laboratory for fuzzy and quantum torus spectral triples."""

__version__ = "0.1.0"
