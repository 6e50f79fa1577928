"""Exact verification of short presentations of matrix rings."""

__version__ = "0.1.0"
