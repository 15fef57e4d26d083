"""Selberg heat-trace toolkit for odd-dimensional hyperbolic manifolds."""

__version__ = "0.1.0"
