"""Exact finite-field arithmetic and normal basis generator criteria."""

__version__ = "0.1.0"
