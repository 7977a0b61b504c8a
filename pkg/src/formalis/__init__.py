"""Exact-arithmetic toolkit for bigraded formality, Kazhdan-Lusztig
combinatorics and the weight-set calculus on flag varieties."""

__version__ = "0.1.0"
