"""Exact Betti tables for compact toric varieties of complex dimension 2 and 3."""

__version__ = "0.1.0"
