"""Simulation and numerical verification of the triangle-count local CLT in G(n,p)."""

__version__ = "0.1.0"
