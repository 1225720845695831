"""Numerical toolkit for sums of weighted differentiation composition operators."""
__version__ = "0.1.0"
