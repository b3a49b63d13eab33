"""Combinatorial toolkit for prime character degree graph classification."""

__version__ = "0.1.0"
