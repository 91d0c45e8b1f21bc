"""Exact persistent homology, transferred A-infinity structures and Massey products."""

__version__ = "0.1.0"
