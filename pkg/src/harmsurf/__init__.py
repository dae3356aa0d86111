"""Numerical toolkit for harmonic surfaces over the unit disk."""

__version__ = "0.1.0"
