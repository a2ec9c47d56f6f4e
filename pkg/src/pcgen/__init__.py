"""Stretching generators built from bounded proof search, at desk scale."""

__version__ = "0.1.0"
