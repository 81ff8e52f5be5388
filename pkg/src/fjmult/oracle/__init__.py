"""Brute-force ground truth: explicit groups, Weil representations and DL characters."""

from .dl import classical_dl_table
from .jacobi import jacobi_descent_bruteforce
from .pairing import pair_multiplicity_bruteforce
from .realize import SmallGroup, build_group
from .weilrep import schrodinger_weil

__all__ = [
    "SmallGroup",
    "build_group",
    "classical_dl_table",
    "jacobi_descent_bruteforce",
    "pair_multiplicity_bruteforce",
    "schrodinger_weil",
]
