"""Cyclic character groups of the torus factors f_j^x and f_{2j}^1.

A factor is cyclic of order N, and characters are stored as residues c
mod N under the pairing <c, a> = exp(2 pi i c a / N).  Frobenius and
inversion act on characters by unit multipliers on Z/N.  Nothing here
touches actual field elements.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConsistencyError, InvalidFieldError, UsageError


class Family(str, enum.Enum):
    SP = "Sp"
    U = "U"
    GL = "GL"

    @property
    def kappa(self) -> int:
        return 2 if self is Family.SP else 1


class Kind(str, enum.Enum):
    SPLIT = "Split"
    NORM_ONE = "NormOne"


def as_family(value: Family | str) -> Family:
    if isinstance(value, Family):
        return value
    for fam in Family:
        if fam.value.lower() == str(value).lower():
            return fam
    raise UsageError(f"unknown family {value!r}")


def as_kind(value: Kind | str) -> Kind:
    if isinstance(value, Kind):
        return value
    for kind in Kind:
        if kind.value.lower() == str(value).lower():
            return kind
    raise UsageError(f"unknown factor kind {value!r}")


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def check_field(q: int) -> None:
    if not isinstance(q, int) or q < 3 or q % 2 == 0 or not is_prime_power(q):
        raise InvalidFieldError(f"q must be an odd prime power >= 3, got {q!r}")


@dataclass(frozen=True, order=True)
class FactorKind:
    kind: Kind
    j: int
    q: int

    def __post_init__(self):
        check_field(self.q)
        if self.j < 1:
            raise UsageError(f"factor parameter j must be positive, got {self.j}")

    @property
    def order(self) -> int:
        return factor_order(self.kind, self.j, self.q)


def factor_order(kind: Kind | str, j: int, q: int) -> int:
    """q^j - 1 for a split factor, q^j + 1 for a norm-one factor."""
    check_field(q)
    if j < 1:
        raise UsageError(f"j must be positive, got {j}")
    return q**j - 1 if as_kind(kind) is Kind.SPLIT else q**j + 1


def quadratic_char_index(kind: Kind | str, j: int, q: int) -> int:
    """Residue of the unique order-2 character; evaluates to (-1)^a at a."""
    return factor_order(kind, j, q) // 2


def check_family_constraint(family: Family, kind: Kind, j: int) -> None:
    if family is Family.GL and kind is Kind.NORM_ONE:
        raise UsageError("GL tori have no norm-one factors")
    if family is Family.U:
        if kind is Kind.SPLIT and j % 2:
            raise UsageError(f"U tori have split factors only for even j (got j={j})")
        if kind is Kind.NORM_ONE and j % 2 == 0:
            raise UsageError(f"U tori have norm-one factors only for odd j (got j={j})")


@dataclass(frozen=True)
class TwistGroup:
    """Abelian group Z/a x Z/b acting on Z/N by multipliers base^i (-1)^e.

    ``elements`` lists the multiplier of every abstract element, so its
    length is the abstract order even when two elements act alike (this
    happens only for N = 2).
    """

    family: Family
    kind: Kind
    j: int
    q: int
    modulus: int
    base: int
    cyclic_order: int
    sign_order: int
    faithful: bool

    @property
    def generators(self) -> tuple[int, ...]:
        gens = [self.base % self.modulus]
        if self.sign_order == 2:
            gens.append(-1 % self.modulus)
        return tuple(gens)

    @property
    def order(self) -> int:
        return self.cyclic_order * self.sign_order

    def multiplier(self, i: int, e: int = 0) -> int:
        return pow(self.base, i % self.cyclic_order, self.modulus) * (-1) ** (e % 2) % self.modulus

    @property
    def elements(self) -> tuple[int, ...]:
        return _elements(self)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.elements)

    def index(self, i: int, e: int = 0) -> int:
        """Flat index of the abstract element (i, e)."""
        return (i % self.cyclic_order) * self.sign_order + (e % self.sign_order)

    def compose(self, a: int, b: int) -> int:
        i1, e1 = divmod(a, self.sign_order)
        i2, e2 = divmod(b, self.sign_order)
        return self.index(i1 + i2, e1 + e2)

    def inverse(self, a: int) -> int:
        i, e = divmod(a, self.sign_order)
        return self.index(-i, -e)


@lru_cache(maxsize=None)
def _elements(group: TwistGroup) -> tuple[int, ...]:
    return tuple(
        group.multiplier(i, e) for i in range(group.cyclic_order) for e in range(group.sign_order)
    )


@lru_cache(maxsize=None)
def twist_group(family: Family | str, kind: Kind | str, j: int, q: int) -> TwistGroup:
    """Multipliers by which the rational Weyl group twists one factor copy.

    Sp: <q, -1> on split factors and <q> (order 2j) on norm-one factors.
    GL: <q>.  U: <-q> on both kinds.  The abstract order is kappa_G * j;
    the multiplier image is checked to have that order except for the
    degenerate modulus 2, where the action is recorded as unfaithful.
    """
    family, kind = as_family(family), as_kind(kind)
    check_family_constraint(family, kind, j)
    n_mod = factor_order(kind, j, q)
    if family is Family.SP and kind is Kind.SPLIT:
        base, cyc, sgn = q, j, 2
    elif family is Family.SP:
        base, cyc, sgn = q, 2 * j, 1
    elif family is Family.GL:
        base, cyc, sgn = q, j, 1
    else:
        base, cyc, sgn = -q, j, 1
    expected = family.kappa * j
    if cyc * sgn != expected:
        raise ConsistencyError(f"twist group order {cyc * sgn} != kappa*j = {expected}")
    group = TwistGroup(family, kind, j, q, n_mod, base % n_mod, cyc, sgn, True)
    faithful = len(group.image) == expected
    if not faithful and n_mod > 2:
        raise ConsistencyError(
            f"twist group image has order {len(group.image)} != {expected} "
            f"for {family.value}/{kind.value}({j}), q={q}"
        )
    return TwistGroup(family, kind, j, q, n_mod, base % n_mod, cyc, sgn, faithful)


def multiplier_set(group_kind: str, kind: Kind | str, j: int, q: int, family: Family | str | None = None) -> frozenset[int]:
    kind = as_kind(kind)
    n_mod = factor_order(kind, j, q)
    gk = group_kind.lower()
    if gk == "gal":
        gens = [q % n_mod]
    elif gk == "gamma":
        gens = [q % n_mod, -1 % n_mod]
    elif gk in ("gammag", "gamma_g"):
        if family is None:
            raise UsageError("GammaG orbits need a family")
        return twist_group(family, kind, j, q).image
    else:
        raise UsageError(f"unknown orbit group {group_kind!r}")
    elems = {1 % n_mod}
    frontier = list(elems)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % n_mod
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return frozenset(elems)


def orbit(group_kind: str, kind: Kind | str, j: int, q: int, c: int, family: Family | str | None = None) -> frozenset[int]:
    """Orbit of the residue c under Gal = <q>, Gamma = <q, -1>, or the family rule."""
    n_mod = factor_order(kind, j, q)
    return frozenset(c * m % n_mod for m in multiplier_set(group_kind, kind, j, q, family))


def is_regular_residue(j: int, q: int, s: int) -> bool:
    """True iff s in Z/(q^j+1) has a Galois orbit of full size 2j."""
    return len(orbit("gal", Kind.NORM_ONE, j, q, s)) == 2 * j


def quadratic_value(kind: Kind | str, j: int, q: int, a: int) -> int:
    """Value of the quadratic character at the element with residue a."""
    return -1 if a % 2 else 1
