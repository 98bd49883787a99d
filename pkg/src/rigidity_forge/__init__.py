"""Exact non-rigidity certificates for Hadamard, Fourier, circulant and abelian group matrices."""

__version__ = "0.1.0"
