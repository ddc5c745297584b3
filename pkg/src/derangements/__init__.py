"""Exact derangement statistics for permutation groups and class counts for
small classical groups."""

__version__ = "0.1.0"
