"""Explicit Burgess bounds for composite moduli."""

__version__ = "0.1.0"
