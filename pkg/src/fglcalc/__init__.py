"""Exact formal-group-law calculus: universal Schur functions, Segre classes
and Gysin maps for flag bundles."""

__version__ = "0.1.0"
