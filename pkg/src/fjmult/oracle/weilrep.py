"""Schrodinger model of the Weil representation of Sp_2n(F_p).

The representation acts on functions on F_p^n.  Generators act by

* Levi  m(a):  f(x) -> chi(det a) f(a^T x)      (chi the Legendre symbol)
* unipotent n(b):  f(x) -> psi(sign * x^T b x / 2) f(x)
* Weyl element:  f(x) -> gamma^n p^{-n/2} sum_y psi(tau * x.y) f(y)

The constants sign, tau and gamma are not fixed by hand: every
combination is tried, the representation is propagated along the
spanning tree of the group, and a combination is accepted only if the
result is a homomorphism on every (element, generator) edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import ConstructionError
from .fields import legendre
from .groups import MatrixGroup, generate, rank_mod, sp_generator_kinds

GAMMAS = (1, -1, 1j, -1j)
HOMOMORPHISM_TOL = 1e-8


@dataclass(frozen=True)
class Convention:
    unipotent_sign: int
    fourier_sign: int
    gamma: complex


def _points(n: int, p: int) -> np.ndarray:
    return np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)[:, ::-1]


def _point_index(vecs: np.ndarray, p: int) -> np.ndarray:
    return (vecs % p) @ (p ** np.arange(vecs.shape[-1]))


class SchrodingerModel:
    """Generator operators for a given prime p, rank n and additive scale."""

    def __init__(self, n: int, p: int, scale: int = 1):
        self.n, self.p, self.scale = n, p, scale % p
        self.points = _points(n, p)
        self.dim = p**n

    def psi(self, t) -> np.ndarray:
        return np.exp(2j * np.pi * ((self.scale * np.asarray(t)) % self.p) / self.p)

    def levi(self, a: np.ndarray) -> np.ndarray:
        det = int(round(np.linalg.det(a))) % self.p
        target = _point_index(self.points @ a % self.p, self.p)  # rows: x, image a^T x
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        mat[np.arange(self.dim), target] = legendre(det, self.p)
        return mat

    def unipotent(self, b: np.ndarray, sign: int) -> np.ndarray:
        half = pow(2, -1, self.p)
        quad = np.einsum("xi,ij,xj->x", self.points, b, self.points) * half * sign
        return np.diag(self.psi(quad))

    def fourier(self, tau: int, gamma: complex) -> np.ndarray:
        dots = self.points @ self.points.T * tau
        return gamma**self.n * self.psi(dots) / self.p ** (self.n / 2)

    def generator_ops(self, conv: Convention, prim: int) -> list[np.ndarray]:
        ops = []
        for kind, datum, _ in sp_generator_kinds(self.n, self.p, prim):
            if kind == "levi":
                ops.append(self.levi(datum))
            elif kind == "unipotent":
                ops.append(self.unipotent(datum, conv.unipotent_sign))
            else:
                ops.append(self.fourier(conv.fourier_sign, conv.gamma))
        return ops


def propagate(group: MatrixGroup, gen_ops: list[np.ndarray]) -> np.ndarray:
    """Operators for every element along the spanning tree of the group."""
    dim = gen_ops[0].shape[0]
    mats = np.empty((group.order, dim, dim), dtype=complex)
    mats[0] = np.eye(dim)
    for i in range(1, group.order):
        mats[i] = mats[group.parent[i]] @ gen_ops[group.parent_gen[i]]
    return mats


def homomorphism_residual(group: MatrixGroup, mats: np.ndarray, gen_ops: list[np.ndarray]) -> float:
    worst = 0.0
    for g, op in zip(group.generators, gen_ops):
        targets = group.index_of(group.multiply(group.elements, g[None]))
        diff = np.abs(mats[targets] - mats @ op).max()
        worst = max(worst, float(diff))
    return worst


@dataclass
class WeilRepresentation:
    group: MatrixGroup
    n: int
    p: int
    scale: int
    convention: Convention
    matrices: np.ndarray
    residual: float

    @property
    def traces(self) -> np.ndarray:
        return np.einsum("nii->n", self.matrices)

    def class_function(self) -> np.ndarray:
        return self.group.class_function(self.traces)


_SP_CACHE: dict = {}


def symplectic_group(n: int, p: int) -> MatrixGroup:
    key = ("sp", n, p)
    if key not in _SP_CACHE:
        from .fields import field

        prim = field(p).generator
        gens = [m for _, _, m in sp_generator_kinds(n, p, prim)]
        _SP_CACHE[key] = generate(f"Sp{2 * n}(F_{p})", p, gens)
    return _SP_CACHE[key]


def solve_conventions(n: int, p: int, scale: int = 1, signs=(1, -1), first_only: bool = False) -> list[tuple[Convention, float]]:
    """Every sign/constant choice that yields a homomorphism on Sp_2n(F_p)."""
    from .fields import field

    group = symplectic_group(n, p)
    model = SchrodingerModel(n, p, scale)
    prim = field(p).generator
    found = []
    for sign, tau, gamma in itertools.product(signs, (1, -1), GAMMAS):
        conv = Convention(sign, tau, gamma)
        ops = model.generator_ops(conv, prim)
        mats = propagate(group, ops)
        res = homomorphism_residual(group, mats, ops)
        if res < HOMOMORPHISM_TOL:
            found.append((conv, res))
            if first_only:
                break
    return found


_WEIL_CACHE: dict = {}


def schrodinger_weil(n: int, p: int, scale: int = 1) -> WeilRepresentation:
    """The Weil representation for psi(t) = exp(2 pi i scale t / p).

    Among the homomorphic conventions the one with unipotent sign +1 is
    taken, which fixes the central character of the Heisenberg group.
    """
    key = (n, p, scale % p)
    if key in _WEIL_CACHE:
        return _WEIL_CACHE[key]
    from .fields import field

    sols = solve_conventions(n, p, scale, signs=(1,), first_only=True)
    if not sols:
        raise ConstructionError(f"no homomorphic Schrodinger convention for Sp{2 * n}(F_{p})")
    conv, _ = sols[0]
    group = symplectic_group(n, p)
    model = SchrodingerModel(n, p, scale)
    ops = model.generator_ops(conv, field(p).generator)
    mats = propagate(group, ops)
    res = homomorphism_residual(group, mats, ops)
    if res >= HOMOMORPHISM_TOL:
        raise ConstructionError(f"Weil representation fails the homomorphism check ({res:.2e})")
    rep = WeilRepresentation(group, n, p, scale % p, conv, mats, res)
    _WEIL_CACHE[key] = rep
    return rep


def levi_weil_trace(a: np.ndarray, p: int) -> float:
    """Trace of the Weil operator of m(a): chi(det a) p^{dim ker(a - 1)}."""
    n = a.shape[0]
    det = int(round(np.linalg.det(a))) % p
    fixed = n - rank_mod((a - np.eye(n, dtype=np.int64)) % p, p)
    return float(legendre(det, p) * p**fixed)


def fixed_space_dim(g: np.ndarray, p: int) -> int:
    k = g.shape[0]
    return k - rank_mod((g - np.eye(k, dtype=np.int64)) % p, p)
