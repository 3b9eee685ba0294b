"""Moment maps, gradient-flow semistability and exact cone certificates."""

__version__ = "0.1.0"
