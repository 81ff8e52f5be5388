"""Brute-force Fourier-Jacobi descent on Sp_4(F_q), basis e1, e2, f1, f2.

Level 1: R_1 is the stabilizer of e1, a semidirect product of
H_1 = Sp(e2, f2) with the Heisenberg group N_1.  The representation
nu = omega_psi(h) rho_psi(n) combines the Schrodinger model of Sp_2
with a Heisenberg representation rho whose normalization is found by
requiring the homomorphism and equivariance identities on every element.

Level 2: R_2 is the maximal unipotent subgroup and nu is a generic
character psi(x_{e1 <- e2} + x_{e2 <- f2}).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import ConstructionError, UsageError
from .dl import round_integer
from .realize import SmallGroup
from .weilrep import schrodinger_weil, symplectic_group

HOM_TOL = 1e-8


@dataclass
class JacobiData:
    level: int
    elements: np.ndarray  # indices into Sp_4
    h_indices: np.ndarray | None  # image in Sp_2 for each element (level 1)
    nu_traces: np.ndarray
    convention: tuple | None = None


def _heisenberg_coords(n_mats: np.ndarray, p: int) -> np.ndarray:
    """(x, y, z) with n f1 = f1 + z e1 + x e2 + y f2."""
    col = n_mats[:, :, 2]
    return np.stack([col[:, 1], col[:, 3], col[:, 0]], axis=1) % p


def _rho_candidates(p: int, coords: np.ndarray, scale: int):
    """Schrodinger-type operators on C[F_p] under sign/shift/symmetrization choices."""
    pts = np.arange(p)
    half = pow(2, -1, p)

    def psi(t):
        return np.exp(2j * np.pi * ((scale * t) % p) / p)

    for swap, sy, sz, kappa in itertools.product((0, 1), (1, -1), (1, -1), range(p)):
        mats = np.zeros((len(coords), p, p), dtype=complex)
        for k, (x, y, z) in enumerate(coords):
            if swap:
                x, y = y, x
            # (rho f)(t) = psi(sz (z + kappa x y) + sy y t) f(t + x)
            phase = sz * (z + kappa * x * y * half) + sy * y * pts
            mats[k, pts, (pts + x) % p] = psi(phase)
        yield (swap, sy, sz, kappa), mats


def _level_one(G: SmallGroup, scale: int) -> JacobiData:
    p = G.spec.q
    els = G.group.elements
    stab = np.nonzero(np.all(els[:, :, 0] == np.eye(4, dtype=np.int64)[:, 0], axis=1))[0]
    r_mats = els[stab]
    h_blocks = r_mats[:, [1, 3]][:, :, [1, 3]]
    sp2 = symplectic_group(1, p)
    h_idx = sp2.index_of(h_blocks)
    # n = h^{-1} r where h is the Sp_2 block embedded on (e2, f2)
    h_full = np.broadcast_to(np.eye(4, dtype=np.int64), r_mats.shape).copy()
    h_full[:, 1, 1], h_full[:, 1, 3] = h_blocks[:, 0, 0], h_blocks[:, 0, 1]
    h_full[:, 3, 1], h_full[:, 3, 3] = h_blocks[:, 1, 0], h_blocks[:, 1, 1]
    inv_blocks = sp2.elements[sp2.inverse_indices()[h_idx]]
    h_inv = h_full.copy()
    h_inv[:, 1, 1], h_inv[:, 1, 3] = inv_blocks[:, 0, 0], inv_blocks[:, 0, 1]
    h_inv[:, 3, 1], h_inv[:, 3, 3] = inv_blocks[:, 1, 0], inv_blocks[:, 1, 1]
    n_mats = np.einsum("nij,njk->nik", h_inv, r_mats) % p
    is_unip = np.all(h_blocks == np.eye(2, dtype=np.int64), axis=(1, 2))
    n_set = r_mats[is_unip]
    if len(n_set) != p**3:
        raise ConstructionError(f"Heisenberg radical has {len(n_set)} elements, expected {p ** 3}")
    n_codes = {tuple(m.ravel()): k for k, m in enumerate(n_set)}
    n_of = np.array([n_codes[tuple(m.ravel())] for m in n_mats])
    coords = _heisenberg_coords(n_set, p)

    weil = schrodinger_weil(1, p, scale)
    omega = weil.matrices
    mult = np.array([[n_codes[tuple((a @ b % p).ravel())] for b in n_set] for a in n_set])
    # conjugation action of Sp_2 generators on N
    gens = [sp2.elements[i] for i in range(1, sp2.order)][:8]
    conj_tables = []
    for g in gens:
        full = np.eye(4, dtype=np.int64)
        full[np.ix_([1, 3], [1, 3])] = g
        finv = np.eye(4, dtype=np.int64)
        finv[np.ix_([1, 3], [1, 3])] = sp2.elements[sp2.inverse_indices()[sp2.index_of(g)]]
        conj_tables.append((sp2.index_of(g), [n_codes[tuple((full @ m @ finv % p).ravel())] for m in n_set]))
    chosen = None
    for conv, rho in _rho_candidates(p, coords, scale):
        prod = np.einsum("aij,bjk->abik", rho, rho)
        if np.abs(prod - rho[mult]).max() > HOM_TOL:
            continue
        ok = True
        for gi, table in conj_tables:
            w = omega[gi]
            lhs = np.einsum("ij,njk,kl->nil", w, rho, np.conj(w).T)
            if np.abs(lhs - rho[table]).max() > HOM_TOL:
                ok = False
                break
        if ok:
            chosen = (conv, rho)
            break
    if chosen is None:
        raise ConstructionError("no Heisenberg representation compatible with the Weil representation of Sp_2")
    conv, rho = chosen
    nu = np.einsum("nij,nji->n", omega[h_idx], rho[n_of])
    # full homomorphism check of nu on R_1
    nu_mats = np.einsum("nij,njk->nik", omega[h_idx], rho[n_of])
    _check_representation(G, stab, nu_mats)
    return JacobiData(1, stab, h_idx, nu, conv)


def _check_representation(G: SmallGroup, elements: np.ndarray, mats: np.ndarray, samples: int = 400) -> None:
    rng = np.random.default_rng(0)
    pos = {int(g): k for k, g in enumerate(elements)}
    grp = G.group
    a = rng.integers(0, len(elements), samples)
    b = rng.integers(0, len(elements), samples)
    prods = grp.index_of(grp.multiply(grp.elements[elements[a]], grp.elements[elements[b]]))
    c = np.array([pos[int(x)] for x in prods])
    err = np.abs(np.einsum("nij,njk->nik", mats[a], mats[b]) - mats[c]).max()
    if err > HOM_TOL:
        raise ConstructionError(f"Jacobi representation fails the homomorphism check ({err:.2e})")


def _level_two(G: SmallGroup, scale: int) -> JacobiData:
    p = G.spec.q
    els = G.group.elements
    lower = np.tril(np.ones((2, 2), dtype=bool), -1)
    ident_diag = np.all(els[:, np.arange(4), np.arange(4)] == 1, axis=1)
    mask = ident_diag & ~np.any(els[:, 2:, :2], axis=(1, 2)) & ~np.any(els[:, :2, :2][:, lower], axis=1)
    idx = np.nonzero(mask)[0]
    if len(idx) != p**4:
        raise ConstructionError(f"maximal unipotent subgroup has {len(idx)} elements, expected {p ** 4}")
    u = els[idx]
    t = (u[:, 0, 1] + u[:, 1, 3]) % p
    vals = np.exp(2j * np.pi * (scale * t % p) / p)
    _check_representation(G, idx, vals[:, None, None])
    return JacobiData(2, idx, None, vals)


_CACHE: dict = {}


def jacobi_data(G: SmallGroup, level: int, scale: int = 1) -> JacobiData:
    if G.spec.family.value != "Sp" or G.spec.n != 2:
        raise UsageError("the Jacobi-group oracle is built on Sp_4 only")
    key = (G.spec.q, level, scale % G.spec.q)
    if key not in _CACHE:
        if level == 1:
            _CACHE[key] = _level_one(G, scale)
        elif level == 2:
            _CACHE[key] = _level_two(G, scale)
        else:
            raise UsageError(f"unsupported level {level}")
    return _CACHE[key]


def jacobi_descent_bruteforce(G: SmallGroup, level: int, pi: np.ndarray, sigma: np.ndarray | None = None, scale: int = 1) -> int:
    """<pi (x) conj(nu), sigma>_{R_l}: pi a class function of Sp_4, sigma one of Sp_2 (level 1)."""
    data = jacobi_data(G, level, scale)
    pi_vals = pi[G.group.class_of[data.elements]]
    total = pi_vals * np.conj(data.nu_traces)
    if level == 1:
        if sigma is None:
            raise UsageError("level 1 needs sigma on Sp_2")
        sp2 = symplectic_group(1, G.spec.q)
        total = total * np.conj(sigma[sp2.class_of[data.h_indices]])
    val = total.sum() / len(data.elements)
    return round_integer(complex(val), f"Jacobi pairing at level {level}")
