"""Finite-field Fourier-Jacobi descent for U_{4n-2} and Sp_{4n}.

Both settings start from a cuspidal representation of the Siegel Levi
attached to a regular norm-one character s of the elliptic torus, and
split the induced Deligne-Lusztig character into a generic part and a
non-generic part using the anisotropic torus T_a with s placed on the
diagonal.  Descent multiplicities against sigma on H_l are reduced to
the basic pairing against Ind(tau x sigma), whose torus is the
concatenation of a GL block and the torus of sigma.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .cyclic import Family, Kind, as_family, factor_order, is_regular_residue, orbit
from .engine import MultiplicityReport, multiplicity_general
from .errors import NoDistinguishedError, UsageError
from .tori import (
    GroupSpec,
    TorusCharacter,
    TorusDatum,
    all_characters,
    enumerate_torus_classes,
    torus_rank,
    weyl_act,
    weyl_group,
)

CONTEXTS = ("U", "SP")


@dataclass(frozen=True)
class VirtualDLCombo:
    """A rational combination of Deligne-Lusztig characters on one group."""

    terms: tuple[tuple[Fraction, TorusDatum, TorusCharacter], ...]

    def __add__(self, other: "VirtualDLCombo") -> "VirtualDLCombo":
        return VirtualDLCombo(self.terms + other.terms)

    def scaled(self, c) -> "VirtualDLCombo":
        return VirtualDLCombo(tuple((Fraction(c) * a, T, chi) for a, T, chi in self.terms))

    def pair(self, S: TorusDatum, eta: TorusCharacter) -> tuple[Fraction, list[MultiplicityReport]]:
        """Sum of coefficient * m(R_{T,chi}, R_{S,eta}) and the per-term reports."""
        total = Fraction(0)
        reports = []
        for coeff, T, chi in self.terms:
            rep = multiplicity_general(T, chi, S, eta)
            reports.append(rep)
            total += coeff * rep.total
        return total, reports

    def to_json(self) -> dict:
        return {
            "terms": [
                {"coefficient": str(c), "torus": T.to_json(), "character": list(chi.values)}
                for c, T, chi in self.terms
            ]
        }


@dataclass(frozen=True)
class DescentSpec:
    context: str
    n: int
    q: int
    s: int
    a: int | None = None
    l: int | None = None

    def __post_init__(self):
        ctx = self.context.upper()
        if ctx not in CONTEXTS:
            raise UsageError(f"descent context must be U or SP, got {self.context!r}")
        object.__setattr__(self, "context", ctx)
        if ctx == "U" and self.n < 2:
            raise UsageError("the unitary descent needs n >= 2")
        if self.n < 1:
            raise UsageError("n must be >= 1")
        if not is_regular_residue(self.norm_one_degree, self.q, self.s):
            raise UsageError(f"s = {self.s} is not regular in Z/{factor_order(Kind.NORM_ONE, self.norm_one_degree, self.q)}")

    @property
    def norm_one_degree(self) -> int:
        """j with s in f_{2j}^1: 2n - 1 for U, n for Sp."""
        return 2 * self.n - 1 if self.context == "U" else self.n

    @property
    def group(self) -> GroupSpec:
        if self.context == "U":
            return GroupSpec(Family.U, 4 * self.n - 2, self.q)
        return GroupSpec(Family.SP, 2 * self.n, self.q)

    @property
    def max_level(self) -> int:
        return 2 * self.n - 1 if self.context == "U" else 2 * self.n

    @property
    def half(self) -> int:
        return factor_order(Kind.NORM_ONE, self.norm_one_degree, self.q) // 2

    def h_group(self, l: int) -> GroupSpec | None:
        """H_l, or None when it is trivial."""
        if self.context == "U":
            m = 4 * self.n - 2 * l - 2
            return GroupSpec(Family.U, m, self.q) if m else None
        m = 2 * self.n - l
        return GroupSpec(Family.SP, m, self.q) if m else None


def levi_torus(spec: DescentSpec) -> tuple[TorusDatum, TorusCharacter]:
    """The elliptic torus of the Siegel Levi with s pushed into its character group."""
    j = spec.norm_one_degree
    T = TorusDatum.make(spec.group, {2 * j: 1})
    c = (spec.q**j - 1) * spec.s
    return T, TorusCharacter(T, (c,))


def anisotropic_torus(spec: DescentSpec) -> tuple[TorusDatum, TorusCharacter]:
    j = spec.norm_one_degree
    Ta = TorusDatum.make(spec.group, {}, {j: 2})
    return Ta, TorusCharacter(Ta, (spec.s, spec.s))


def pi_components(context: str, n: int, q: int, s: int) -> dict[str, VirtualDLCombo]:
    """Generic and non-generic constituents, plus the full induced character."""
    spec = DescentSpec(context, n, q, s)
    T, chi = levi_torus(spec)
    Ta, chia = anisotropic_torus(spec)
    half = Fraction(1, 2)
    sign = 1 if spec.context == "U" else -1
    full = VirtualDLCombo(((Fraction(sign), T, chi),))
    reg = VirtualDLCombo(((sign * half, T, chi), (-sign * half, Ta, chia)))
    ss = VirtualDLCombo(((sign * half, T, chi), (sign * half, Ta, chia)))
    return {"reg": reg, "ss": ss, "full": full}


def _gl_block_factor(family: Family) -> int:
    return 2 if family is Family.U else 1


def induce_in_stages(blocks: list[tuple[TorusDatum, TorusCharacter]], family: Family | str | None = None) -> tuple[TorusDatum, TorusCharacter]:
    """Torus and character of Ind(tau_1 x ... x sigma) from the Levi blocks.

    Every block but the last must be a GL block; a GL_l block over
    F_{q^k} (k = 2 for U, 1 for Sp) contributes split factors of degree
    k j.  The last block may be classical or GL.
    """
    if not blocks:
        raise UsageError("nothing to induce")
    last_T = blocks[-1][0]
    if last_T.family is not Family.GL:
        family = last_T.family
        q = last_T.q
        gl_blocks = blocks[:-1]
        classical = blocks[-1]
    else:
        if family is None:
            raise UsageError("target family required when every block is GL")
        family = as_family(family)
        gl_blocks = blocks
        classical = None
        k = _gl_block_factor(family)
        q = _base_field(last_T.q, k)
    k = _gl_block_factor(family)
    split: dict[int, list[int]] = {}
    norm_one: dict[int, list[int]] = {}
    size = 0
    for T, chi in gl_blocks:
        if T.family is not Family.GL:
            raise UsageError("only the last block may be classical")
        if T.q != q**k:
            raise UsageError(f"GL block must be over F_{q**k}, got F_{T.q}")
        for c, v in zip(T.coordinates, chi.values):
            split.setdefault(k * c.j, []).append(v)
        size += k * T.group.n
    if classical is not None:
        T, chi = classical
        for c, v in zip(T.coordinates, chi.values):
            (split if c.kind is Kind.SPLIT else norm_one).setdefault(c.j, []).append(v)
        size += T.group.n
    if family is Family.SP:
        target = GroupSpec(family, size, q)
    else:
        target = GroupSpec(family, size, q)
    S = TorusDatum.make(target, {j: len(v) for j, v in split.items()}, {j: len(v) for j, v in norm_one.items()})
    values = []
    for b in S.blocks:
        values.extend((split if b.kind is Kind.SPLIT else norm_one)[b.j])
    return S, TorusCharacter(S, tuple(values))


def _base_field(qk: int, k: int) -> int:
    root = round(qk ** (1 / k))
    for cand in (root - 1, root, root + 1):
        if cand > 1 and cand**k == qk:
            return cand
    raise UsageError(f"{qk} is not a {k}-th power")


def gl_block(context: str, l: int, q: int, residue: int) -> tuple[TorusDatum, TorusCharacter]:
    """Elliptic torus of the GL_l block (over F_{q^2} for U) with the given character."""
    qb = q**2 if context.upper() == "U" else q
    T = TorusDatum.make(GroupSpec(Family.GL, l, qb), {l: 1})
    return T, TorusCharacter(T, (residue,))


def is_cuspidal_block(T: TorusDatum, chi: TorusCharacter) -> bool:
    """Elliptic GL torus with a character whose Frobenius orbit has full size."""
    if T.family is not Family.GL or T.split != {T.group.n: 1} or T.norm_one:
        return False
    return len(orbit("gal", Kind.SPLIT, T.group.n, T.q, chi.values[0])) == T.group.n


def regular_gl_residues(context: str, l: int, q: int) -> list[int]:
    qb = q**2 if context.upper() == "U" else q
    mod = qb**l - 1
    return [c for c in range(mod) if len(orbit("gal", Kind.SPLIT, l, qb, c)) == l]


@dataclass
class DescentResult:
    value: Fraction
    torus: TorusDatum
    character: TorusCharacter
    tau_sign: int
    sigma_sign: int
    reports: list[MultiplicityReport] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": int(self.value) if self.value.denominator == 1 else str(self.value),
            "induced_torus": self.torus.to_json(),
            "induced_character": list(self.character.values),
            "tau_sign": self.tau_sign,
            "sigma_sign": self.sigma_sign,
            "terms": [r.to_json() for r in self.reports],
        }


def descent_multiplicity(
    spec: DescentSpec,
    combo: VirtualDLCombo,
    sigma: tuple[TorusDatum, TorusCharacter] | None,
    tau_block: tuple[TorusDatum, TorusCharacter],
    tau_sign: int,
    sigma_sign: int,
) -> DescentResult:
    """m(combo, sigma_sign R_sigma) via the pairing with Ind(tau x sigma)."""
    l = tau_block[0].group.n
    if not 0 < l < spec.max_level:
        raise UsageError(f"level l = {l} outside 0 < l < {spec.max_level}")
    if not is_cuspidal_block(*tau_block):
        raise UsageError("tau must be cuspidal: elliptic GL torus with a regular character")
    h = spec.h_group(l)
    blocks = [tau_block]
    if sigma is not None:
        if h is None or sigma[0].group != h:
            raise UsageError(f"sigma must live on {h.label() if h else 'the trivial group'}")
        blocks.append(sigma)
    elif h is not None:
        raise UsageError(f"sigma on {h.label()} is required at level {l}")
    S, eta = induce_in_stages(blocks, spec.group.family)
    if S.group != spec.group:
        raise UsageError(f"induced torus lives on {S.group.label()}, expected {spec.group.label()}")
    raw, reports = combo.pair(S, eta)
    return DescentResult(raw * tau_sign * sigma_sign, S, eta, tau_sign, sigma_sign, reports)


# -- probes -----------------------------------------------------------------


def _sample_characters(T: TorusDatum, limit: int, rng: random.Random) -> list[TorusCharacter]:
    size = 1
    for m in T.moduli:
        size *= m
    if size <= limit:
        return list(all_characters(T))
    out = {TorusCharacter.trivial(T).values}
    while len(out) < limit:
        out.add(tuple(rng.randrange(m) for m in T.moduli))
    return [TorusCharacter(T, v) for v in sorted(out)]


def _probe_sigmas(spec: DescentSpec, l: int, limit: int, rng: random.Random) -> Iterable[tuple[TorusDatum, TorusCharacter] | None]:
    h = spec.h_group(l)
    if h is None:
        yield None
        return
    for S0 in enumerate_torus_classes(h):
        for chi in _sample_characters(S0, limit, rng):
            yield S0, chi


def _first_regular_tau(spec: DescentSpec, l: int) -> tuple[TorusDatum, TorusCharacter]:
    return gl_block(spec.context, l, spec.q, regular_gl_residues(spec.context, l, spec.q)[0])


def _same_orbit(chi: TorusCharacter, eta: TorusCharacter) -> bool:
    if chi.torus != eta.torus:
        return False
    return any(weyl_act(w, chi).values == eta.values for w in weyl_group(chi.torus))


def matching_sigma(spec: DescentSpec, a: int) -> tuple[TorusDatum, TorusCharacter]:
    """The sigma-bar summand for a: torus f_{4n-2}^1 x f_2^1 (U) or f_{2n}^1 (Sp), character (-s, a)."""
    j = spec.norm_one_degree
    h = spec.h_group(spec.n - 1 if spec.context == "U" else spec.n)
    if spec.context == "U":
        S0 = TorusDatum.make(h, {}, {j: 1, 1: 1} if j != 1 else {1: 2})
        vals = {j: spec.s + spec.half, 1: a}
        return S0, TorusCharacter(S0, tuple(vals[b.j] for b in S0.blocks))
    S0 = TorusDatum.make(h, {}, {j: 1})
    return S0, TorusCharacter(S0, (spec.s + spec.half,))


def verify_u_descent(n: int, q: int, s: int | None = None, samples: int = 12, seed: int = 0) -> dict:
    """Engine-side checks of the unitary descent statements for one (n, q, s)."""
    j = 2 * n - 1
    s = _default_s(j, q) if s is None else s
    spec = DescentSpec("U", n, q, s)
    comps = pi_components("U", n, q, s)
    rng = random.Random(seed)
    part1 = []
    for l in range(1, spec.max_level):
        tau = _first_regular_tau(spec, l)
        for sigma in _probe_sigmas(spec, l, samples, rng):
            rk0 = torus_rank(sigma[0]) if sigma else 0
            res = descent_multiplicity(spec, comps["full"], sigma, tau, (-1) ** (l + 1), (-1) ** (l + 1 + rk0))
            part1.append(_probe_json(l, sigma, res))
    # the matching summands at l = n - 1
    l0 = n - 1
    tau0 = gl_block("U", l0, q, regular_gl_residues("U", l0, q)[0])
    matches = []
    Ta, chia = anisotropic_torus(spec)
    T, chi = levi_torus(spec)
    for a in range(q + 1):
        sigma = matching_sigma(spec, a)
        S, eta = induce_in_stages([tau0, sigma])
        rep_t = multiplicity_general(T, chi, S, eta)
        rep_a = multiplicity_general(Ta, chia, S, eta)
        res = descent_multiplicity(spec, comps["ss"], sigma, tau0, (-1) ** n, (-1) ** n)
        matches.append({
            "a": a,
            "m_T": rep_t.total,
            "m_j0": _as_int(rep_a.term(0)),
            "m_j1": _as_int(rep_a.term(1)),
            "m_Ta": rep_a.total,
            "m_pi_ss": _as_int(res.value),
            "terms": rep_a.to_json()["terms"],
        })
    zero = _zero_probes(spec, comps, range(n - 1, spec.max_level), samples, rng)
    return _summary(spec, part1, matches, zero, expect_j=(-1, 2))


def sp_descent_table(n: int, q: int, s: int | None = None, samples: int = 12, seed: int = 0) -> dict:
    """Engine-side checks of the symplectic descent statements for one (n, q, s)."""
    s = _default_s(n, q) if s is None else s
    spec = DescentSpec("SP", n, q, s)
    comps = pi_components("SP", n, q, s)
    rng = random.Random(seed)
    part1 = []
    for l in range(1, spec.max_level):
        tau = _first_regular_tau(spec, l)
        for sigma in _probe_sigmas(spec, l, samples, rng):
            rk0 = torus_rank(sigma[0]) if sigma else 0
            res = descent_multiplicity(spec, comps["full"], sigma, tau, (-1) ** (l + 1), (-1) ** (l + rk0))
            part1.append(_probe_json(l, sigma, res))
    tau0 = gl_block("SP", n, q, regular_gl_residues("SP", n, q)[0])
    sigma = matching_sigma(spec, 0)
    T, chi = levi_torus(spec)
    Ta, chia = anisotropic_torus(spec)
    S, eta = induce_in_stages([tau0, sigma])
    rep_t = multiplicity_general(T, chi, S, eta)
    rep_a = multiplicity_general(Ta, chia, S, eta)
    res = descent_multiplicity(spec, comps["ss"], sigma, tau0, (-1) ** (n + 1), (-1) ** n)
    matches = [{
        "m_T": rep_t.total,
        "m_j0": _as_int(rep_a.term(0)),
        "m_j1": _as_int(rep_a.term(1)),
        "m_Ta": rep_a.total,
        "m_pi_ss": _as_int(res.value),
        "terms": rep_a.to_json()["terms"],
    }]
    zero = _zero_probes(spec, comps, range(n, spec.max_level), samples, rng)
    return _summary(spec, part1, matches, zero, expect_j=(-1, 2))


def _zero_probes(spec: DescentSpec, comps, levels, samples: int, rng: random.Random) -> list[dict]:
    out = []
    match_level = spec.n - 1 if spec.context == "U" else spec.n
    targets = []
    if match_level in levels:
        a_range = range(spec.q + 1) if spec.context == "U" else range(1)
        targets = [matching_sigma(spec, a) for a in a_range]
    for l in levels:
        if l <= 0:
            continue
        tau = _first_regular_tau(spec, l)
        for sigma in _probe_sigmas(spec, l, samples, rng):
            if l == match_level and sigma is not None and any(_same_orbit(sigma[1], t[1]) for t in targets):
                continue
            res = descent_multiplicity(spec, comps["ss"], sigma, tau, 1, 1)
            out.append(_probe_json(l, sigma, res))
    return out


def _probe_json(l: int, sigma, res: DescentResult) -> dict:
    return {
        "l": l,
        "sigma_torus": sigma[0].describe() if sigma else "trivial",
        "sigma_character": list(sigma[1].values) if sigma else [],
        "value": _as_int(res.value),
    }


def _summary(spec: DescentSpec, part1, matches, zero, expect_j) -> dict:
    ok1 = all(p["value"] == 1 for p in part1)
    ok2 = all(
        m["m_pi_ss"] == 1 and m["m_Ta"] == 1 and m["m_T"] == 1 and (m["m_j0"], m["m_j1"]) == expect_j
        for m in matches
    )
    ok0 = all(p["value"] == 0 for p in zero)
    return {
        "context": spec.context,
        "group": spec.group.label(),
        "n": spec.n,
        "q": spec.q,
        "s": spec.s,
        "part1": {"probes": len(part1), "ok": ok1, "values": sorted({p["value"] for p in part1})},
        "matching": matches,
        "zero": {"probes": len(zero), "ok": ok0, "values": sorted({p["value"] for p in zero})},
        "outside_hypothesis": spec.n < 2,
        "ok": ok1 and ok2 and ok0,
    }


def _as_int(x) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _default_s(j: int, q: int) -> int:
    return next(k for k in range(1, q**j + 1) if is_regular_residue(j, q, k))


# -- depth-zero distinction parameter --------------------------------------------


def distinguished_parameter(m: int, ramified: bool, s: int, q: int) -> int:
    """Uniformizer eigenvalue c_s of the distinguished depth-zero supercuspidal attached to s.

    Unramified: m odd, s a residue mod q^m + 1 with Frobenius-squared
    orbit of size m; c_s = 1.  Ramified: m even, s a residue mod
    q^{m/2} + 1 with Frobenius orbit of size m; c_s = -theta'(s).
    """
    if m < 1:
        raise UsageError("m must be positive")
    if ramified:
        if m % 2:
            raise NoDistinguishedError(f"no distinguished depth-zero supercuspidal for odd m = {m} in the ramified case")
        j = m // 2
        if len(orbit("gal", Kind.NORM_ONE, j, q, s)) != m:
            raise UsageError(f"s = {s} is not regular")
        return -1 if s % 2 == 0 else 1
    if m % 2 == 0:
        raise NoDistinguishedError(f"no distinguished depth-zero supercuspidal for even m = {m} in the unramified case")
    mod = factor_order(Kind.NORM_ONE, m, q)
    seen = {s % mod}
    x = s % mod
    for _ in range(m):
        x = x * q * q % mod
        seen.add(x)
    if len(seen) != m:
        raise UsageError(f"s = {s} is not regular")
    return 1
