"""Clifford-valued fields, their Fourier and wavelet transforms, and uncertainty-bound checks."""

__version__ = "0.1.0"
