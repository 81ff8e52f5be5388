"""Fourier-Jacobi multiplicities for Deligne-Lusztig characters of Sp, U and GL over F_q."""

__version__ = "0.1.0"
