"""Levi-reachable Deligne-Lusztig characters of Sp_4(F_q) by parabolic induction.

Coordinates are ordered e1, e2, f1, f2.  The three parabolics used:

* Borel: stabilizer of the flag <e1> < <e1, e2>, Levi the split torus;
* Klingen: stabilizer of <e1>, Levi GL_1 x Sp_2 (the Sp_2 acting on e2, f2);
* Siegel: stabilizer of <e1, e2>, Levi GL_2 acting by m(a).

The two anisotropic torus classes are not reachable this way and are
reported as missing.
"""

from __future__ import annotations

import numpy as np

from ..cyclic import Family, Kind
from ..errors import ValidationError
from ..tori import GroupSpec, TorusCharacter, TorusDatum, all_characters
from .dl import DLTable, borel_induced, classical_dl_table, induce, validate_table
from .fields import field
from .realize import SmallGroup, build_group


def klingen_subgroup(G: SmallGroup) -> np.ndarray:
    els = G.group.elements
    return np.nonzero(~np.any(els[:, 1:, 0], axis=1))[0]


def siegel_subgroup(G: SmallGroup) -> np.ndarray:
    els = G.group.elements
    return np.nonzero(~np.any(els[:, 2:, :2], axis=(1, 2)))[0]


def klingen_induced(G: SmallGroup, T: TorusDatum, values) -> np.ndarray:
    """Ind from the Klingen parabolic of theta_1(g_11) R^{Sp_2}(g restricted to e2, f2)."""
    q = G.spec.q
    sp2 = build_group(GroupSpec(Family.SP, 1, q))
    inner = _inner_torus(T, sp2.spec)
    table = classical_dl_table(sp2)
    f_inner = table.get(inner, values[1:])
    idx = klingen_subgroup(G)
    els = G.group.elements[idx]
    logs = field(q).log[els[:, 0, 0]]
    theta1 = np.exp(2j * np.pi * (logs * values[0] % (q - 1)) / (q - 1))
    blocks = els[:, [1, 3]][:, :, [1, 3]]
    inner_vals = f_inner[sp2.group.class_of[sp2.group.index_of(blocks)]]
    return induce(G, idx, theta1 * inner_vals)


def siegel_induced(G: SmallGroup, T: TorusDatum, values) -> np.ndarray:
    """Ind from the Siegel parabolic of R^{GL_2}(a) for the Levi part m(a)."""
    q = G.spec.q
    gl2 = build_group(GroupSpec(Family.GL, 2, q))
    inner = TorusDatum.make(gl2.spec, T.split)
    f_inner = classical_dl_table(gl2).get(inner, values)
    idx = siegel_subgroup(G)
    blocks = G.group.elements[idx][:, :2, :2]
    inner_vals = f_inner[gl2.group.class_of[gl2.group.index_of(blocks)]]
    return induce(G, idx, inner_vals)


def _inner_torus(T: TorusDatum, sp2: GroupSpec) -> TorusDatum:
    rest = list(T.coordinates)[1:]
    kind = rest[0].kind
    return TorusDatum.make(sp2, {1: 1} if kind is Kind.SPLIT else {}, {1: 1} if kind is Kind.NORM_ONE else {})


def levi_route(T: TorusDatum) -> str | None:
    if T.split == {1: 2}:
        return "borel"
    if T.split == {1: 1} and T.norm_one == {1: 1}:
        return "klingen"
    if T.split == {2: 1}:
        return "siegel"
    return None


def sp4_levi_table(G: SmallGroup) -> DLTable:
    if G.spec.family is not Family.SP or G.spec.n != 2:
        raise ValidationError("the Levi-induction table is built for Sp_4 only")
    entries, missing = {}, []
    for T in G.tori:
        route = levi_route(T)
        if route is None:
            missing.append(T)
            continue
        for chi in all_characters(T):
            if route == "borel":
                f = borel_induced(G, T, chi.values)
            elif route == "klingen":
                f = klingen_induced(G, T, chi.values)
            else:
                f = siegel_induced(G, T, chi.values)
            entries[(T, chi.values)] = f
    diag = validate_table(G, entries)
    # the split torus is reachable through all three parabolics
    split = next(T for T in G.tori if levi_route(T) == "borel")
    worst = 0.0
    for chi in all_characters(split):
        f = entries[(split, chi.values)]
        worst = max(worst, float(np.abs(klingen_induced(G, split, chi.values) - f).max()))
        worst = max(worst, float(np.abs(siegel_induced(G, split, chi.values) - f).max()))
    if worst > 1e-6:
        raise ValidationError(f"induction routes disagree on the split torus ({worst:.2e})")
    diag["route_max_error"] = worst
    return DLTable(G, entries, diag, missing)
