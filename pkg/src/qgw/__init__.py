"""Exact computations for quantized coordinate rings of the classical groups."""

__version__ = "0.1.0"
