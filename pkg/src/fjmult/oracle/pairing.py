"""Brute-force Fourier-Jacobi pairings of class functions."""

from __future__ import annotations

import numpy as np

from .dl import round_integer
from .realize import SmallGroup


def pair_multiplicity_bruteforce(G: SmallGroup, pi: np.ndarray, sigma: np.ndarray, omega: np.ndarray) -> int:
    """(1/|G|) sum over classes of |c| pi(g) conj(omega(g)) conj(sigma(g)), rounded."""
    val = np.sum(G.class_sizes * pi * np.conj(omega) * np.conj(sigma)) / G.order
    return round_integer(complex(val), f"pairing on {G.spec.label()}")


def pairing_matrix(G: SmallGroup, pis: np.ndarray, sigmas: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """All pairings at once: rows index pis, columns index sigmas."""
    left = pis * (G.class_sizes * np.conj(omega))[None, :]
    vals = left @ np.conj(sigmas).T / G.order
    out = np.rint(vals.real)
    err = np.abs(vals - out).max() if vals.size else 0.0
    if err > 1e-6:
        round_integer(complex(vals.flat[np.abs(vals - out).argmax()]), f"pairing on {G.spec.label()}")
    return out.astype(np.int64)
