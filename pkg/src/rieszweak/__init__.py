"""Riesz potentials, fractional maximal functions and weak norms of radial functions."""

__version__ = "0.1.0"
