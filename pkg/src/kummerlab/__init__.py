"""Exact verification kernels for Nieto's quintic and Heisenberg-invariant quartics."""

__version__ = "0.1.0"
