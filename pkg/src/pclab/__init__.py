"""Exact experiments on heights, rationality and torsion denominators of power series."""

__version__ = "0.1.0"
