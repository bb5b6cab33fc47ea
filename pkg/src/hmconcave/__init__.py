"""Numerical verification of harmonically m-concave set-valued functions."""

__version__ = "0.1.0"
