"""Symmetry verification engine for pp-wave spacetimes."""

__version__ = "0.1.0"
