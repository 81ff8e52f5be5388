"""Weil character values on semisimple elements of a maximal torus."""

from __future__ import annotations

from dataclasses import dataclass

from .cyclic import Family, Kind
from .errors import UsageError
from .tori import TorusCharacter, TorusDatum


@dataclass(frozen=True)
class SemisimpleElement:
    torus: TorusDatum
    values: tuple[int, ...]

    def __post_init__(self):
        mods = self.torus.moduli
        if len(self.values) != len(mods):
            raise UsageError(f"expected {len(mods)} residues, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(int(v) % m for v, m in zip(self.values, mods)))


@dataclass(frozen=True)
class WeilValueReport:
    value: int
    exponent: int
    ell: int
    theta: int

    def to_json(self) -> dict:
        return {"value": self.value, "exponent": self.exponent, "ell": self.ell, "theta": self.theta}


def _values(s) -> tuple[int, ...]:
    return tuple(s.values) if hasattr(s, "values") else tuple(s)


def fix_exponent(T: TorusDatum, s) -> int:
    """Half the dimension of the fixed space: sum of j over identity coordinates."""
    return sum(c.j for c, v in zip(T.coordinates, _values(s)) if v == 0)


def ell_count(T: TorusDatum, s) -> int:
    """Number of norm-one coordinates with non-identity value."""
    return sum(1 for c, v in zip(T.coordinates, _values(s)) if c.kind is Kind.NORM_ONE and v != 0)


def theta_value(T: TorusDatum, s) -> int:
    return -1 if sum(_values(s)) % 2 else 1


def weil_char_semisimple(T: TorusDatum, s) -> WeilValueReport:
    e, ell, theta = fix_exponent(T, s), ell_count(T, s), theta_value(T, s)
    q, fam = T.q, T.family
    if fam is Family.SP:
        value = (-1) ** ell * theta * q**e
    elif fam is Family.U:
        value = (-1) ** T.group.n * theta * (-q) ** e
    else:
        value = theta * q**e
    return WeilValueReport(value, e, ell, theta)


def quadratic_twist(T: TorusDatum, chi: TorusCharacter) -> TorusCharacter:
    """chi times the restriction of det^{(q-eps)/2}, i.e. chi * theta_T."""
    if T.family is Family.SP:
        raise UsageError("the quadratic twist is defined only for U and GL")
    if chi.torus != T:
        raise UsageError("character lives on a different torus")
    return TorusCharacter(T, tuple(v + m // 2 for v, m in zip(chi.values, T.moduli)))
