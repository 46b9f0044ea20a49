"""Soma Cube combinatorial-search laboratory."""

__version__ = "0.1.0"
