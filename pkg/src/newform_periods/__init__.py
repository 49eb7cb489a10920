"""Exact local L-factors, newform Whittaker values and period lattice sums
for GL(n) over a p-adic field."""

__version__ = "0.1.0"
