"""Exact computations with a symmetric-crystal module realised in a quantum shuffle algebra."""

__version__ = "0.1.0"
