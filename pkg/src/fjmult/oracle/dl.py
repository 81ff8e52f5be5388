"""Deligne-Lusztig class functions on the small groups.

Rank-one groups (GL_1, U_1, Sp_2, GL_2, U_2) use the closed form

    R_{T,theta}(su) = theta(s) Q_T(u)                    if s is central,
    R_{T,theta}(s)  = sum over t in T conjugate to s of theta(t)   otherwise,

with Q_T(1) = eps_G eps_T |G|_{p'} / |T| and Q_T(u) = 1 for u != 1.  The
resulting table is accepted only after the orthogonality, degree and
torus-restriction checks pass.  Split tori are cross-checked against
Borel induction.  On Sp_4(F_3) the Levi-reachable tori are obtained by
parabolic induction from GL_1 x Sp_2, GL_2 or the split torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..cyclic import Family, Kind
from ..errors import ConstructionError, ValidationError
from ..tori import TorusCharacter, TorusDatum, all_characters, torus_rank, weyl_act, weyl_group
from .realize import SmallGroup, build_group

ROUND_TOL = 1e-6


def round_integer(x: complex, what: str = "value") -> int:
    r = round(x.real)
    if abs(x - r) > ROUND_TOL:
        raise ValidationError(f"{what} {x:.8g} is not within {ROUND_TOL} of an integer")
    return int(r)


# -- Jordan decomposition ---------------------------------------------------


def jordan_parts(G: SmallGroup) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the semisimple and unipotent parts of every element."""
    grp = G.group
    p = G.spec.q
    orders = grp.element_orders()
    semis = np.empty(grp.order, dtype=np.int64)
    unis = np.empty(grp.order, dtype=np.int64)
    for idx in range(grp.order):
        m = int(orders[idx])
        pk = 1
        while m % (pk * p) == 0:
            pk *= p
        r = m // pk
        # a = 1 mod r, a = 0 mod p^k
        a = (pow(pk, -1, r) * pk) % m if r > 1 else 0
        g = grp.elements[idx]
        semis[idx] = grp.index_of(_matpow(g, a, p))
        unis[idx] = grp.index_of(_matpow(g, (1 - a) % m, p))
    return semis, unis


def _matpow(g: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.eye(g.shape[0], dtype=np.int64)
    base = g % p
    while e:
        if e & 1:
            out = out @ base % p
        base = base @ base % p
        e >>= 1
    return out


def center_mask(G: SmallGroup) -> np.ndarray:
    return G.group.class_sizes[G.group.class_of] == 1


# -- the rank-one closed form -------------------------------------------------


def rank_one_dl(G: SmallGroup, T: TorusDatum, values) -> np.ndarray:
    grp = G.group
    torus = G.tori[T]
    theta = torus.character(values)
    if not hasattr(G, "_jordan"):
        G._jordan = jordan_parts(G)
    semis, unis = G._jordan
    central = center_mask(G)
    ident = grp.index_of(np.eye(grp.dim, dtype=np.int64))
    eps = (-1) ** (G.split_rank - torus_rank(T))
    q_one = eps * G.p_prime_order() // torus.order
    pos = {int(g): k for k, g in enumerate(torus.elements)}
    torus_classes = grp.class_of[torus.elements]
    out = np.zeros(grp.num_classes, dtype=complex)
    for c, rep in enumerate(grp.class_reps):
        s, u = int(semis[rep]), int(unis[rep])
        if central[s]:
            if s not in pos:
                raise ConstructionError(f"central element outside torus {T.describe()}")
            out[c] = theta[pos[s]] * (q_one if u == ident else 1)
        else:
            if u != ident:
                raise ConstructionError("non-central semisimple part with unipotent part in a rank-one group")
            out[c] = theta[torus_classes == c].sum()
    return out


# -- induction --------------------------------------------------------------


def induce(G: SmallGroup, subgroup: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Ind_H^G f for f given on the element indices of H (a subgroup)."""
    grp = G.group
    sub = np.asarray(subgroup)
    totals = np.bincount(grp.class_of[sub], weights=np.real(values), minlength=grp.num_classes) + 1j * np.bincount(
        grp.class_of[sub], weights=np.imag(values), minlength=grp.num_classes
    )
    return grp.order * totals / (len(sub) * grp.class_sizes)


def borel_subgroup(G: SmallGroup) -> tuple[np.ndarray, np.ndarray]:
    """Element indices of a Borel subgroup containing the split torus, and the diagonal exponents."""
    grp, p = G.group, G.spec.q
    from .fields import field

    if G.spec.family is Family.U:
        return _unitary_borel(G)
    F = field(p)
    els = grp.elements
    k = grp.dim
    lower = np.tril(np.ones((k, k), dtype=bool), -1)
    if G.spec.family is Family.SP:
        n = G.spec.n
        # upper block triangular with upper-triangular Levi part: stabilizes the standard flag
        mask = np.ones(grp.order, dtype=bool)
        for g_idx in range(grp.order):
            g = els[g_idx]
            if np.any(g[n:, :n]) or np.any(g[:n, :n][lower[:n, :n]]):
                mask[g_idx] = False
        idx = np.nonzero(mask)[0]
        diag = els[idx][:, np.arange(n), np.arange(n)]
    else:
        mask = ~np.any(els[:, lower], axis=1)
        idx = np.nonzero(mask)[0]
        diag = els[idx][:, np.arange(k), np.arange(k)]
    logs = F.log[diag]
    return idx, logs


def _unitary_borel(G: SmallGroup) -> tuple[np.ndarray, np.ndarray]:
    from .realize import _u2_split_frame

    F = G.unitary.F
    frame = _u2_split_frame(F)
    v = frame[:, 0]
    idx, logs = [], []
    for i, g in enumerate(G.field_elements):
        gv = [F.add(F.mul(int(g[r, 0]), int(v[0])), F.mul(int(g[r, 1]), int(v[1]))) for r in range(2)]
        a = F.mul(gv[0], F.inv(int(v[0])))
        if gv[1] == F.mul(a, int(v[1])):
            idx.append(i)
            logs.append([F.log[a]])
    return np.array(idx), np.array(logs)


def borel_induced(G: SmallGroup, T: TorusDatum, values) -> np.ndarray:
    """Ind_B^G of the character of the split torus inflated to the Borel."""
    idx, logs = borel_subgroup(G)
    mods = np.array(T.moduli)
    phase = (logs * np.asarray(values)[None, :] % mods) / mods
    return induce(G, idx, np.exp(2j * np.pi * phase.sum(axis=1)))


# -- tables -----------------------------------------------------------------


@dataclass
class DLTable:
    group: SmallGroup
    entries: dict[tuple[TorusDatum, tuple[int, ...]], np.ndarray]
    diagnostics: dict = field(default_factory=dict)
    missing: list[TorusDatum] = field(default_factory=list)

    def get(self, T: TorusDatum, values) -> np.ndarray:
        chi = TorusCharacter(T, tuple(values))
        return self.entries[(T, chi.values)]

    def pairs(self):
        return list(self.entries.items())


def weyl_carry_count(chi: TorusCharacter, eta: TorusCharacter) -> int:
    """#{w in W(T) : w chi = eta} for characters on the same torus."""
    if chi.torus != eta.torus:
        return 0
    return sum(1 for w in weyl_group(chi.torus) if weyl_act(w, chi).values == eta.values)


def validate_table(G: SmallGroup, entries: dict) -> dict:
    """Orthogonality, degree and torus-restriction checks; raises on failure."""
    keys = list(entries)
    mat = np.array([entries[k] for k in keys])
    gram = (mat * G.class_sizes) @ np.conj(mat).T / G.order
    worst = 0.0
    for a, (Ta, va) in enumerate(keys):
        for b, (Tb, vb) in enumerate(keys):
            expect = weyl_carry_count(TorusCharacter(Ta, va), TorusCharacter(Tb, vb)) if Ta == Tb else 0
            err = abs(gram[a, b] - expect)
            worst = max(worst, err)
            if err > ROUND_TOL:
                raise ValidationError(
                    f"{G.spec.label()}: <R({Ta.describe()},{va}), R({Tb.describe()},{vb})> = {gram[a, b]:.6g}, expected {expect}"
                )
    ident_class = G.group.class_of[G.group.index_of(np.eye(G.group.dim, dtype=np.int64))]
    for (T, v), f in entries.items():
        torus_order = G.tori[T].order
        if abs(abs(f[ident_class]) - G.p_prime_order() / torus_order) > ROUND_TOL:
            raise ValidationError(f"{G.spec.label()}: degree of R({T.describe()},{v}) is {f[ident_class]}")
    restriction = _check_torus_restriction(G, entries)
    return {"orthogonality_max_error": worst, "characters": len(keys), "regular_restriction_checks": restriction}


def _check_torus_restriction(G: SmallGroup, entries: dict) -> int:
    """On regular semisimple torus elements R(t) = sum over w in W(T) of theta(w t)."""
    grp = G.group
    checks = 0
    for (T, v), f in entries.items():
        torus = G.tori[T]
        theta = torus.character(v)
        classes = grp.class_of[torus.elements]
        counts = np.bincount(classes, minlength=grp.num_classes)
        weyl_size = len(weyl_group(T))
        for k, c in enumerate(classes):
            # regular: centralizer is exactly the torus
            if grp.order // grp.class_sizes[c] != torus.order:
                continue
            if counts[c] != weyl_size:
                raise ValidationError(f"regular class meets {T.describe()} in {counts[c]} points, expected {weyl_size}")
            expect = theta[classes == c].sum()
            if abs(f[c] - expect) > ROUND_TOL:
                raise ValidationError(f"{G.spec.label()}: R({T.describe()},{v}) fails on a regular torus element")
            checks += 1
    return checks


def classical_dl_table(G: SmallGroup | None = None, spec=None) -> DLTable:
    """Complete validated table for Sp_2, GL_1, GL_2, U_1, U_2, or the Levi-reachable part of Sp_4(F_3)."""
    if G is None:
        G = build_group(spec)
    cached = getattr(G, "_dl_table", None)
    if cached is not None:
        return cached
    if G.spec.family is Family.SP and G.spec.n == 2:
        from .sp4 import sp4_levi_table

        table = sp4_levi_table(G)
    else:
        if G.spec.n > 2:
            raise ValidationError(f"no closed-form table for {G.spec.label()}")
        entries = {}
        for T in G.tori:
            for chi in all_characters(T):
                entries[(T, chi.values)] = rank_one_dl(G, T, chi.values)
        diag = validate_table(G, entries)
        split = [T for T in G.tori if all(b.kind is Kind.SPLIT for b in T.blocks) and torus_rank(T) == G.split_rank]
        borel_err = 0.0
        for T in split:
            for chi in all_characters(T):
                ind = borel_induced(G, T, chi.values)
                borel_err = max(borel_err, float(np.abs(ind - entries[(T, chi.values)]).max()))
        if borel_err > ROUND_TOL:
            raise ValidationError(f"{G.spec.label()}: split-torus table disagrees with Borel induction ({borel_err:.2e})")
        diag["borel_max_error"] = borel_err
        table = DLTable(G, entries, diag)
    G._dl_table = table
    return table
