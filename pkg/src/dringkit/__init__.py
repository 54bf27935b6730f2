"""Exact computations with free operators on fields given by finite algebra schemes."""

__version__ = "0.1.0"
