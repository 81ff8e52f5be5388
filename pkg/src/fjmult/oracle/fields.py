"""Small finite fields F_{p^d} with table arithmetic.

Elements are integers 0 .. p^d - 1 read as base-p coefficient vectors in
the basis 1, x, ..., x^{d-1}, where x is a root of a primitive
polynomial found by deterministic search.  Only prime p is supported,
which covers every group the oracle builds.
"""

from __future__ import annotations

import cmath
import itertools
from functools import lru_cache

import numpy as np

from ..errors import InvalidFieldError


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p**0.5) + 1))


def _polymulmod(a: list[int], b: list[int], mod_poly: list[int], p: int) -> list[int]:
    d = len(mod_poly) - 1
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for i in range(d + 1):
                prod[k - d + i] = (prod[k - d + i] - c * mod_poly[i]) % p
    return prod[:d]


class GF:
    """The field with p^d elements."""

    def __init__(self, p: int, d: int = 1):
        if not _is_prime(p):
            raise InvalidFieldError(f"oracle fields need a prime characteristic, got {p}")
        self.p, self.d, self.size = p, d, p**d
        self.poly = self._find_primitive_poly()
        self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.d})"

    def _vec(self, a: int) -> list[int]:
        out = []
        for _ in range(self.d):
            out.append(a % self.p)
            a //= self.p
        return out

    def _int(self, v) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(v))

    def _find_primitive_poly(self) -> list[int]:
        p, d = self.p, self.d
        if d == 1:
            for g in range(1, p):
                if len({pow(g, k, p) for k in range(p - 1)}) == p - 1:
                    return [(-g) % p, 1]
        for coeffs in itertools.product(range(p), repeat=d):
            if coeffs[0] == 0:
                continue
            poly = list(coeffs) + [1]
            x = [0, 1] + [0] * (d - 2)
            cur = [1] + [0] * (d - 1)
            seen = set()
            for _ in range(p**d - 1):
                cur = _polymulmod(cur, x, poly, p)
                t = tuple(cur)
                if t in seen:
                    break
                seen.add(t)
            if len(seen) == p**d - 1:
                return poly
        raise InvalidFieldError(f"no primitive polynomial found for GF({p}^{d})")

    def _build_tables(self) -> None:
        n = self.size
        if self.d == 1:
            gen = (-self.poly[0]) % self.p
            exp = [pow(gen, k, self.p) for k in range(n - 1)]
        else:
            x = [0, 1] + [0] * (self.d - 2)
            cur = [1] + [0] * (self.d - 1)
            exp = []
            for _ in range(n - 1):
                exp.append(self._int(cur))
                cur = _polymulmod(cur, x, self.poly, self.p)
        self.exp = np.array(exp, dtype=np.int64)
        self.log = np.full(n, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(n - 1)
        vecs = np.array([self._vec(a) for a in range(n)], dtype=np.int64)
        weights = self.p ** np.arange(self.d)
        self.add_table = (((vecs[:, None, :] + vecs[None, :, :]) % self.p) @ weights).astype(np.int64)
        self.neg_table = (((-vecs) % self.p) @ weights).astype(np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        la = self.log[1:]
        mul[1:, 1:] = self.exp[(la[:, None] + la[None, :]) % (n - 1)]
        self.mul_table = mul
        self.vecs = vecs

    @property
    def generator(self) -> int:
        """The primitive element x (or the least primitive root when d = 1)."""
        return int(self.exp[1])

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(self.exp[(-self.log[a]) % (self.size - 1)])

    def power(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return int(self.exp[(self.log[a] * k) % (self.size - 1)])

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.power(a, self.p**times)

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime field."""
        return k % self.p

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, as an integer mod p."""
        total = 0
        for i in range(self.d):
            total = self.add(total, self.frobenius(a, i))
        return total

    def norm_to(self, a: int, sub_degree: int) -> int:
        """Norm to the subfield of degree sub_degree."""
        k = self.d // sub_degree
        out = 1
        for i in range(k):
            out = self.mul(out, self.frobenius(a, i * sub_degree))
        return out

    def regular_matrix(self, a: int) -> np.ndarray:
        """Matrix over F_p of multiplication by a in the basis 1, x, ..., x^{d-1}."""
        basis = [self.p**i for i in range(self.d)]
        cols = [self.vecs[self.mul(a, b)] for b in basis]
        return np.array(cols, dtype=np.int64).T

    def additive_character(self, scale: int = 1):
        """psi(a) = exp(2 pi i scale * Tr(a) / p)."""
        p = self.p

        def psi(a: int) -> complex:
            return cmath.exp(2j * cmath.pi * (scale * self.trace(a) % p) / p)

        return psi


@lru_cache(maxsize=None)
def field(p: int, d: int = 1) -> GF:
    return GF(p, d)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1
