"""Maximal tori as partition pairs, their rational Weyl groups, and ranks."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .cyclic import (
    Family,
    Kind,
    TwistGroup,
    as_family,
    as_kind,
    check_family_constraint,
    check_field,
    factor_order,
    twist_group,
)
from .errors import ConsistencyError, SizeError, UsageError

WEYL_ENUMERATION_LIMIT = 10**7


@dataclass(frozen=True, order=True)
class GroupSpec:
    family: Family
    n: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "family", as_family(self.family))
        check_field(self.q)
        if self.n < 1:
            raise UsageError(f"rank n must be >= 1, got {self.n}")

    @property
    def symplectic_dim(self) -> int:
        return 2 * self.n

    def label(self) -> str:
        name = {Family.SP: f"Sp{2 * self.n}", Family.U: f"U{self.n}", Family.GL: f"GL{self.n}"}
        return f"{name[self.family]}(F_{self.q})"


@dataclass(frozen=True)
class Block:
    kind: Kind
    j: int
    mult: int

    @property
    def key(self) -> tuple[int, int]:
        return (0 if self.kind is Kind.SPLIT else 1, self.j)


@dataclass(frozen=True)
class Coordinate:
    kind: Kind
    j: int
    copy: int


@dataclass(frozen=True)
class TorusDatum:
    """T^F = prod_j (f_j^x)^{lambda_j} x (f_{2j}^1)^{lambda'_j}, blocks sorted by (kind, j)."""

    group: GroupSpec
    blocks: tuple[Block, ...]

    @classmethod
    def make(cls, group: GroupSpec, split: dict[int, int] | Sequence = (), norm_one: dict[int, int] | Sequence = ()) -> "TorusDatum":
        split = dict(split) if not isinstance(split, dict) else split
        norm_one = dict(norm_one) if not isinstance(norm_one, dict) else norm_one
        blocks = [Block(Kind.SPLIT, j, m) for j, m in split.items() if m]
        blocks += [Block(Kind.NORM_ONE, j, m) for j, m in norm_one.items() if m]
        blocks.sort(key=lambda b: b.key)
        torus = cls(group, tuple(blocks))
        torus.validate()
        return torus

    def validate(self) -> None:
        seen = set()
        for b in self.blocks:
            if b.mult < 1 or b.j < 1:
                raise UsageError(f"invalid block {b}")
            if b.key in seen:
                raise UsageError(f"duplicate block {b.kind.value}({b.j})")
            seen.add(b.key)
            check_family_constraint(self.group.family, b.kind, b.j)
        if [b.key for b in self.blocks] != sorted(b.key for b in self.blocks):
            raise UsageError("blocks must be sorted by (kind, j)")
        size = sum(b.j * b.mult for b in self.blocks)
        if size != self.group.n:
            raise UsageError(f"torus size {size} does not match rank n = {self.group.n}")

    @property
    def family(self) -> Family:
        return self.group.family

    @property
    def q(self) -> int:
        return self.group.q

    def partition(self, kind: Kind) -> dict[int, int]:
        return {b.j: b.mult for b in self.blocks if b.kind is kind}

    @property
    def split(self) -> dict[int, int]:
        return self.partition(Kind.SPLIT)

    @property
    def norm_one(self) -> dict[int, int]:
        return self.partition(Kind.NORM_ONE)

    @property
    def coordinates(self) -> tuple[Coordinate, ...]:
        return tuple(Coordinate(b.kind, b.j, k) for b in self.blocks for k in range(b.mult))

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(factor_order(c.kind, c.j, self.q) for c in self.coordinates)

    def block_slices(self) -> list[slice]:
        out, start = [], 0
        for b in self.blocks:
            out.append(slice(start, start + b.mult))
            start += b.mult
        return out

    def twist_groups(self) -> tuple[TwistGroup, ...]:
        return tuple(twist_group(self.family, b.kind, b.j, self.q) for b in self.blocks)

    @property
    def is_anisotropic(self) -> bool:
        return all(b.kind is Kind.NORM_ONE for b in self.blocks)

    def describe(self) -> str:
        parts = [f"{'f' if b.kind is Kind.SPLIT else 'f1'}_{b.j}^{b.mult}" for b in self.blocks]
        return " x ".join(parts)

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "n": self.group.n,
            "q": self.q,
            "split": [[j, m] for j, m in sorted(self.split.items())],
            "norm_one": [[j, m] for j, m in sorted(self.norm_one.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TorusDatum":
        group = GroupSpec(as_family(data["family"]), int(data["n"]), int(data["q"]))
        split = {int(j): int(m) for j, m in data.get("split", [])}
        norm_one = {int(j): int(m) for j, m in data.get("norm_one", [])}
        return cls.make(group, split, norm_one)


@dataclass(frozen=True)
class TorusCharacter:
    """One residue per coordinate, reduced modulo the factor orders."""

    torus: TorusDatum
    values: tuple[int, ...]

    def __post_init__(self):
        mods = self.torus.moduli
        if len(self.values) != len(mods):
            raise UsageError(f"expected {len(mods)} residues, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(int(v) % m for v, m in zip(self.values, mods)))

    @classmethod
    def trivial(cls, torus: TorusDatum) -> "TorusCharacter":
        return cls(torus, (0,) * len(torus.coordinates))

    def to_json(self) -> dict:
        return {
            "values": [[c.kind.value, c.j, c.copy, v] for c, v in zip(self.torus.coordinates, self.values)]
        }

    @classmethod
    def from_json(cls, torus: TorusDatum, data: dict) -> "TorusCharacter":
        lookup = {(c.kind, c.j, c.copy): i for i, c in enumerate(torus.coordinates)}
        values = [None] * len(lookup)
        for kind, j, copy, c in data["values"]:
            key = (as_kind(kind), int(j), int(copy))
            if key not in lookup:
                raise UsageError(f"coordinate {kind}({j}) copy {copy} not on torus")
            values[lookup[key]] = int(c)
        if any(v is None for v in values):
            raise UsageError("character must give a value on every coordinate")
        return cls(torus, tuple(values))


def _partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def _multiplicities(parts: tuple[int, ...]) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in parts:
        out[p] = out.get(p, 0) + 1
    return out


def enumerate_torus_classes(group: GroupSpec) -> list[TorusDatum]:
    """All classes of rational maximal tori, sorted by their JSON form."""
    out = []
    for k in range(group.n + 1):
        for lam in _partitions(k):
            for lam_p in _partitions(group.n - k):
                split, norm_one = _multiplicities(lam), _multiplicities(lam_p)
                fam = group.family
                if fam is Family.GL and norm_one:
                    continue
                if fam is Family.U and (any(j % 2 for j in split) or any(j % 2 == 0 for j in norm_one)):
                    continue
                out.append(TorusDatum.make(group, split, norm_one))
    out.sort(key=lambda t: (sorted(t.split.items()), sorted(t.norm_one.items())))
    return out


def torus_rank(torus: TorusDatum) -> int:
    """Number of split-kind copies."""
    return sum(b.mult for b in torus.blocks if b.kind is Kind.SPLIT)


def sign_e(T: TorusDatum, S: TorusDatum) -> int:
    if T.group != S.group:
        raise UsageError("tori belong to different groups")
    return -1 if (torus_rank(T) + torus_rank(S)) % 2 else 1


@dataclass(frozen=True)
class WeylElement:
    """Per block: a permutation of copies and an abstract twist index per copy.

    Acting on a character sends the value at copy k to copy perm[k],
    multiplied by the multiplier of twists[k].
    """

    torus: TorusDatum
    parts: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def is_identity(self) -> bool:
        return all(p == tuple(range(len(p))) and not any(t) for p, t in self.parts)


def weyl_order_formula(torus: TorusDatum) -> int:
    kappa = torus.family.kappa
    return math.prod(math.factorial(b.mult) * (kappa * b.j) ** b.mult for b in torus.blocks)


class WeylGroup:
    """W_G(T)^F as a product of wreath products (twist group) wr S_mult."""

    def __init__(self, torus: TorusDatum):
        self.torus = torus
        self.twists = torus.twist_groups()
        self.order = math.prod(
            math.factorial(b.mult) * g.order**b.mult for b, g in zip(torus.blocks, self.twists)
        )
        if self.order != weyl_order_formula(torus):
            raise ConsistencyError(
                f"Weyl group order {self.order} disagrees with closed form {weyl_order_formula(torus)}"
            )

    def __len__(self) -> int:
        return self.order

    def identity(self) -> WeylElement:
        return WeylElement(
            self.torus,
            tuple((tuple(range(b.mult)), (0,) * b.mult) for b in self.torus.blocks),
        )

    def check_enumerable(self) -> None:
        if self.order > WEYL_ENUMERATION_LIMIT:
            raise SizeError(
                f"Weyl group of {self.torus.describe()} has order {self.order} > {WEYL_ENUMERATION_LIMIT}"
            )

    def block_elements(self, index: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        b, g = self.torus.blocks[index], self.twists[index]
        for perm in itertools.permutations(range(b.mult)):
            for tw in itertools.product(range(g.order), repeat=b.mult):
                yield perm, tw

    def __iter__(self) -> Iterator[WeylElement]:
        self.check_enumerable()
        per_block = [list(self.block_elements(i)) for i in range(len(self.torus.blocks))]
        for combo in itertools.product(*per_block):
            yield WeylElement(self.torus, tuple(combo))

    def random(self, rng: random.Random) -> WeylElement:
        parts = []
        for b, g in zip(self.torus.blocks, self.twists):
            perm = list(range(b.mult))
            rng.shuffle(perm)
            parts.append((tuple(perm), tuple(rng.randrange(g.order) for _ in range(b.mult))))
        return WeylElement(self.torus, tuple(parts))

    def compose(self, w1: WeylElement, w2: WeylElement) -> WeylElement:
        """The element acting as w1 after w2."""
        parts = []
        for (p1, t1), (p2, t2), g in zip(w1.parts, w2.parts, self.twists):
            perm = tuple(p1[p2[k]] for k in range(len(p2)))
            tw = tuple(g.compose(t1[p2[k]], t2[k]) for k in range(len(p2)))
            parts.append((perm, tw))
        return WeylElement(self.torus, tuple(parts))

    def inverse(self, w: WeylElement) -> WeylElement:
        parts = []
        for (p, t), g in zip(w.parts, self.twists):
            m = len(p)
            perm = [0] * m
            tw = [0] * m
            for k in range(m):
                perm[p[k]] = k
                tw[p[k]] = g.inverse(t[k])
            parts.append((tuple(perm), tuple(tw)))
        return WeylElement(self.torus, tuple(parts))


def weyl_group(torus: TorusDatum) -> WeylGroup:
    return WeylGroup(torus)


def act_values(torus: TorusDatum, twists: Sequence[TwistGroup], w: WeylElement, values: Sequence[int]) -> tuple[int, ...]:
    out = list(values)
    for sl, (perm, tw), g in zip(torus.block_slices(), w.parts, twists):
        src = values[sl]
        mults = g.elements
        for k, v in enumerate(src):
            out[sl.start + perm[k]] = v * mults[tw[k]] % g.modulus
    return tuple(out)


def weyl_act(w: WeylElement, chi: TorusCharacter) -> TorusCharacter:
    if w.torus != chi.torus:
        raise UsageError("Weyl element belongs to a different torus")
    return TorusCharacter(chi.torus, act_values(chi.torus, chi.torus.twist_groups(), w, chi.values))


def stabilizer_order(chi: TorusCharacter) -> int:
    """Size of the stabilizer of chi, computed block by block."""
    torus = chi.torus
    total = 1
    for sl, b, g in zip(torus.block_slices(), torus.blocks, torus.twist_groups()):
        vals = chi.values[sl]
        mults = g.elements
        count = 0
        for perm in itertools.permutations(range(b.mult)):
            ways = 1
            for k, v in enumerate(vals):
                target = vals[perm[k]]
                ways *= sum(1 for m in mults if v * m % g.modulus == target)
                if not ways:
                    break
            count += ways
        total *= count
    return total


def is_regular_character(torus: TorusDatum, chi: TorusCharacter) -> bool:
    """True iff only the identity of W_G(T)^F fixes chi."""
    if chi.torus != torus:
        raise UsageError("character lives on a different torus")
    return stabilizer_order(chi) == 1


def all_characters(torus: TorusDatum) -> Iterator[TorusCharacter]:
    for vals in itertools.product(*(range(m) for m in torus.moduli)):
        yield TorusCharacter(torus, vals)
