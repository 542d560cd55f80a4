"""Thue-Morse along floor(n**c): digit functions, Beatty machinery, Fourier coefficients and census runs."""

__version__ = "0.1.0"
