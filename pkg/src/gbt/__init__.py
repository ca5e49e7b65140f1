"""Exact classification engine for generalized Burniat type surfaces."""

__version__ = "0.1.0"
