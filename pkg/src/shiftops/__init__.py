"""Shift operators for nonsymmetric Jacobi and Macdonald-Koornwinder polynomials."""

__version__ = "0.1.0"
