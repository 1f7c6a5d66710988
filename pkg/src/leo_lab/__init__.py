"""Leakage elimination operator toolkit and desk-scale experiment simulator."""

__version__ = "0.1.0"
