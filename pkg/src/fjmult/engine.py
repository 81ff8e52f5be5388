"""Fourier-Jacobi multiplicities of Deligne-Lusztig characters.

The general formula sums, over common sub-tori Z of S and T, a signed
count of pairs (w, v) in W_G(T)^F x W_G(S)^F for which the twisted
restriction of w.chi to Z agrees with v.eta, divided by the orders of
the Weyl group of the leftover torus and of W_G(S)^F.

Because the Weyl groups are products over blocks and a shape pairs each
block of T with the same block of S, the pair count factors over blocks.
``method="factored"`` exploits this and only enumerates injections of
the designated copies; ``method="naive"`` runs the literal double loop.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclic import Family, Kind, TwistGroup, multiplier_set
from .errors import ConsistencyError, SizeError, UsageError
from .tori import (
    WEYL_ENUMERATION_LIMIT,
    Block,
    Coordinate,
    TorusCharacter,
    TorusDatum,
    act_values,
    is_regular_character,
    sign_e,
    torus_rank,
    weyl_group,
)

Shape = tuple[tuple[Kind, int, int], ...]


@dataclass(frozen=True)
class SubtorusSelection:
    """Chosen coordinates of S, matched in order with the first copies of T's blocks."""

    shape: Shape
    selected_S: tuple[Coordinate, ...]
    designated_T: tuple[Coordinate, ...]

    @property
    def ell(self) -> int:
        return sum(nu for kind, _, nu in self.shape if kind is Kind.NORM_ONE)


@dataclass(frozen=True)
class SelectionTerm:
    shape: Shape
    sign: int
    selections: int
    matches: int
    divisor: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.sign * self.selections * self.matches, self.divisor)

    def to_json(self) -> dict:
        return {
            "shape": [[k.value, j, nu] for k, j, nu in self.shape],
            "sign": self.sign,
            "count": self.matches,
            "selections": self.selections,
            "divisor": self.divisor,
            "value": _fraction_json(self.value),
        }


@dataclass(frozen=True)
class MultiplicityReport:
    total: int
    per_selection: tuple[SelectionTerm, ...] = field(default_factory=tuple)

    def term(self, shape_size: int) -> Fraction:
        """Sum of the terms whose shape has the given number of coordinates."""
        return sum(
            (t.value for t in self.per_selection if sum(nu for _, _, nu in t.shape) == shape_size),
            Fraction(0),
        )

    def to_json(self) -> dict:
        return {"total": self.total, "terms": [t.to_json() for t in self.per_selection]}


def _fraction_json(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _check_same_group(T: TorusDatum, S: TorusDatum) -> None:
    if T.group != S.group:
        raise UsageError(f"tori live in different groups: {T.group} vs {S.group}")


def selection_shapes(S: TorusDatum, T: TorusDatum) -> list[Shape]:
    """Every shape (nu, nu') fitting inside both partition pairs."""
    _check_same_group(T, S)
    t_mult = {(b.kind, b.j): b.mult for b in T.blocks}
    ranges = []
    for b in S.blocks:
        top = min(b.mult, t_mult.get((b.kind, b.j), 0))
        ranges.append([(b.kind, b.j, nu) for nu in range(top + 1)])
    shapes = []
    for combo in itertools.product(*ranges):
        shapes.append(tuple(x for x in combo if x[2]))
    return shapes


def _designated(T: TorusDatum, shape: Shape) -> tuple[Coordinate, ...]:
    return tuple(Coordinate(kind, j, k) for kind, j, nu in shape for k in range(nu))


def common_subtori(S: TorusDatum, T: TorusDatum) -> list[SubtorusSelection]:
    """All subsets of S's coordinates whose shape fits inside T."""
    out = []
    for shape in selection_shapes(S, T):
        per_block = [itertools.combinations(range(_mult(S, kind, j)), nu) for kind, j, nu in shape]
        for choice in itertools.product(*per_block):
            selected = tuple(
                Coordinate(kind, j, k) for (kind, j, _), ks in zip(shape, choice) for k in ks
            )
            out.append(SubtorusSelection(shape, selected, _designated(T, shape)))
    return out


def _mult(torus: TorusDatum, kind: Kind, j: int) -> int:
    for b in torus.blocks:
        if b.kind is kind and b.j == j:
            return b.mult
    return 0


def selection_count(S: TorusDatum, shape: Shape) -> int:
    return math.prod(math.comb(_mult(S, kind, j), nu) for kind, j, nu in shape)


def leftover_weyl_order(T: TorusDatum, shape: Shape) -> int:
    """|W| of the torus left in the centralizer after removing the shape from T."""
    used = {(kind, j): nu for kind, j, nu in shape}
    kappa = T.family.kappa
    total = 1
    for b in T.blocks:
        rest = b.mult - used.get((b.kind, b.j), 0)
        total *= math.factorial(rest) * (kappa * b.j) ** rest
    return total


def _block_index(torus: TorusDatum) -> dict[tuple[Kind, int], int]:
    return {(b.kind, b.j): i for i, b in enumerate(torus.blocks)}


def _restricted_counter(values: Sequence[int], group: TwistGroup, positions: Sequence[int]) -> Counter:
    """Distribution of (w.c)[positions] over one wreath block, up to the free factor."""
    mults = group.elements
    mod = group.modulus
    counts: Counter = Counter()
    for sources in itertools.permutations(range(len(values)), len(positions)):
        options = [[values[k] * m % mod for m in mults] for k in sources]
        for key in itertools.product(*options):
            counts[key] += 1
    return counts


def _block_pair_count(t_vals, s_vals, group: TwistGroup, nu: int, shift: int, t_mult: int, s_mult: int) -> int:
    free_t = math.factorial(t_mult - nu) * group.order ** (t_mult - nu)
    free_s = math.factorial(s_mult - nu) * group.order ** (s_mult - nu)
    a = _restricted_counter(t_vals, group, range(nu))
    b = _restricted_counter(s_vals, group, range(nu))
    mod = group.modulus
    total = 0
    for key, na in a.items():
        shifted = tuple((x + shift) % mod for x in key)
        nb = b.get(shifted)
        if nb:
            total += na * nb
    return total * free_t * free_s


def _matches_factored(T, chi_vals, S, eta_vals, shape: Shape) -> int:
    t_idx, s_idx = _block_index(T), _block_index(S)
    t_slices, s_slices = T.block_slices(), S.block_slices()
    t_groups, s_groups = T.twist_groups(), S.twist_groups()
    used = {(kind, j): nu for kind, j, nu in shape}
    total = 1
    for i, b in enumerate(T.blocks):
        if (b.kind, b.j) not in used:
            total *= math.factorial(b.mult) * t_groups[i].order ** b.mult
    for i, b in enumerate(S.blocks):
        key = (b.kind, b.j)
        if key not in used:
            total *= math.factorial(b.mult) * s_groups[i].order ** b.mult
            continue
        ti = t_idx[key]
        group = s_groups[i]
        total *= _block_pair_count(
            chi_vals[t_slices[ti]], eta_vals[s_slices[i]], group, used[key],
            group.modulus // 2, T.blocks[ti].mult, b.mult,
        )
        if total == 0:
            return 0
    return total


def _positions(torus: TorusDatum, coords: Iterable[Coordinate]) -> list[int]:
    index = {c: i for i, c in enumerate(torus.coordinates)}
    return [index[c] for c in coords]


def _matches_naive(T, chi_vals, S, eta_vals, selection: SubtorusSelection) -> int:
    wT, wS = weyl_group(T), weyl_group(S)
    if wT.order * wS.order > WEYL_ENUMERATION_LIMIT:
        raise SizeError(f"naive double sum of size {wT.order * wS.order} exceeds the limit")
    t_pos = _positions(T, selection.designated_T)
    s_pos = _positions(S, selection.selected_S)
    mods = [T.moduli[p] for p in t_pos]
    t_groups, s_groups = T.twist_groups(), S.twist_groups()
    left = [tuple((vals[p] + m // 2) % m for p, m in zip(t_pos, mods))
            for vals in (act_values(T, t_groups, w, chi_vals) for w in wT)]
    right = [tuple(vals[p] for p in s_pos) for vals in (act_values(S, s_groups, v, eta_vals) for v in wS)]
    return sum(1 for a in left for b in right if a == b)


def multiplicity_general(
    T: TorusDatum,
    chi: TorusCharacter,
    S: TorusDatum,
    eta: TorusCharacter,
    method: str = "factored",
) -> MultiplicityReport:
    """<R_{T,chi} (x) dual Weil, R_{S,eta}> as an exact integer with per-shape terms."""
    _check_same_group(T, S)
    if chi.torus != T or eta.torus != S:
        raise UsageError("characters do not live on the given tori")
    wT, wS = weyl_group(T), weyl_group(S)
    wT.check_enumerable()
    wS.check_enumerable()
    base_sign = torus_rank(T) + torus_rank(S)
    terms = []
    total = Fraction(0)
    for shape in selection_shapes(S, T):
        ell = sum(nu for kind, _, nu in shape if kind is Kind.NORM_ONE)
        sign = -1 if (base_sign + ell) % 2 else 1
        divisor = leftover_weyl_order(T, shape) * wS.order
        if method == "factored":
            matches = _matches_factored(T, chi.values, S, eta.values, shape)
            nsel = selection_count(S, shape)
        elif method == "naive":
            sels = [s for s in common_subtori(S, T) if s.shape == shape]
            per = [_matches_naive(T, chi.values, S, eta.values, s) for s in sels]
            if len(set(per)) > 1:
                raise ConsistencyError(f"selections of shape {shape} disagree: {per}")
            matches, nsel = per[0], len(sels)
        else:
            raise UsageError(f"unknown method {method!r}")
        term = SelectionTerm(shape, sign, nsel, matches, divisor)
        terms.append(term)
        total += term.value
    if total.denominator != 1:
        raise ConsistencyError(f"non-integral multiplicity {total}")
    return MultiplicityReport(int(total), tuple(terms))


def selection_term(T, chi, S, eta, selection: SubtorusSelection) -> Fraction:
    """Single-selection summand by direct enumeration (for designation checks)."""
    ell = selection.ell
    sign = -1 if (torus_rank(T) + torus_rank(S) + ell) % 2 else 1
    matches = _matches_naive(T, chi.values, S, eta.values, selection)
    return Fraction(sign * matches, leftover_weyl_order(T, selection.shape) * weyl_group(S).order)


def match_sets(T: TorusDatum, chi: TorusCharacter, S: TorusDatum, eta: TorusCharacter) -> dict[tuple[Kind, int], list[int]]:
    """I_j and I'_j: copies of S matching some twisted T copy up to Gamma_G."""
    out = {}
    t_idx = _block_index(T)
    t_slices, s_slices = T.block_slices(), S.block_slices()
    for i, b in enumerate(S.blocks):
        key = (b.kind, b.j)
        hits = []
        if key in t_idx:
            mods = multiplier_set("gammag", b.kind, b.j, T.q, T.family)
            n_mod = S.moduli[s_slices[i].start]
            targets = set()
            for c in chi.values[t_slices[t_idx[key]]]:
                targets |= {(c + n_mod // 2) * m % n_mod for m in mods}
            hits = [k for k, e in enumerate(eta.values[s_slices[i]]) if e in targets]
        out[key] = hits
    return out


def multiplicity_regular(T: TorusDatum, chi: TorusCharacter, S: TorusDatum, eta: TorusCharacter) -> int:
    """Closed form for regular pairs: e_{T,S} 2^r if no norm-one matches, else 0."""
    _check_same_group(T, S)
    if not is_regular_character(T, chi) or not is_regular_character(S, eta):
        raise UsageError("regular formula needs regular characters on both sides")
    sets = match_sets(T, chi, S, eta)
    if any(hits for (kind, _), hits in sets.items() if kind is Kind.NORM_ONE):
        return 0
    r = sum(len(hits) for (kind, _), hits in sets.items() if kind is Kind.SPLIT)
    return sign_e(T, S) * 2**r


def intertwine(T: TorusDatum, chi: TorusCharacter, S: TorusDatum, eta: TorusCharacter) -> bool:
    """Some chi coordinate is Galois conjugate to an eta coordinate times theta'."""
    _check_same_group(T, S)
    if T.family is Family.GL:
        raise UsageError("intertwining is defined for Sp and U")
    if not (T.is_anisotropic and S.is_anisotropic):
        raise UsageError("intertwining needs anisotropic tori")
    t_slices, s_slices = T.block_slices(), S.block_slices()
    t_idx = _block_index(T)
    for i, b in enumerate(S.blocks):
        key = (b.kind, b.j)
        if key not in t_idx:
            continue
        n_mod = S.moduli[s_slices[i].start]
        mods = multiplier_set("gammag", b.kind, b.j, T.q, T.family)
        chis = set(chi.values[t_slices[t_idx[key]]])
        for e in eta.values[s_slices[i]]:
            if any((e + n_mod // 2) * m % n_mod in chis for m in mods):
                return True
    return False


def hs_bound(n: int) -> int:
    return 2**n * math.factorial(n) ** 2


@dataclass
class BoundAudit:
    checked: int
    max_abs: int
    violations: list[dict]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checked": self.checked, "max_abs": self.max_abs, "ok": self.ok, "violations": self.violations}


def bound_audit(results: Iterable[dict]) -> BoundAudit:
    """Check |m| <= 2^n n! for each {"n", "m", "pair"} record."""
    checked, max_abs, bad = 0, 0, []
    for r in results:
        checked += 1
        m, n = abs(int(r["m"])), int(r["n"])
        max_abs = max(max_abs, m)
        if m > 2**n * math.factorial(n):
            bad.append({"pair": r.get("pair"), "m": int(r["m"]), "bound": 2**n * math.factorial(n)})
    return BoundAudit(checked, max_abs, bad)
