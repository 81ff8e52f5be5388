"""Concrete realizations of the small groups and their maximal tori.

Every group lives as a matrix group; U_n and Sp_2n carry an embedding
into Sp(V) so that the Weil character is the restriction of the
Schrodinger model.  Torus coordinates use fixed generators:

* split factor f_j^x: the primitive element of F_{p^j};
* norm-one factor f_{2j}^1: zeta^{p^j - 1} for zeta primitive in F_{p^2j}.

The same generators are used on every torus, so that a factor shared by
two tori is identified the same way the engine identifies it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..cyclic import Family, Kind
from ..errors import ConstructionError, SizeError
from ..tori import GroupSpec, TorusDatum, enumerate_torus_classes, torus_rank
from .fields import GF, field
from .groups import (
    MatrixGroup,
    from_elements,
    generate,
    gl_generators,
    levi_embed,
    mat_inv_mod,
    symplectic_basis,
)
from .weilrep import levi_weil_trace, schrodinger_weil, symplectic_group

SUPPORTED = {
    (Family.SP, 1, 3), (Family.SP, 1, 5), (Family.SP, 1, 7), (Family.SP, 2, 3),
    (Family.GL, 1, 3), (Family.GL, 1, 5), (Family.GL, 1, 7),
    (Family.GL, 2, 3), (Family.GL, 2, 5),
    (Family.U, 1, 3), (Family.U, 1, 5), (Family.U, 2, 3),
}


def is_supported(spec: GroupSpec) -> bool:
    return (spec.family, spec.n, spec.q) in SUPPORTED


# -- matrices over F_{p^d} ----------------------------------------------------


def fmat_mul(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    prod = F.mul_table[a[:, :, None], b[None, :, :]]
    out = prod[:, 0, :]
    for k in range(1, a.shape[1]):
        out = F.add_table[out, prod[:, k, :]]
    return out


def fmat_inv2(F: GF, a: np.ndarray) -> np.ndarray:
    det = F.sub(F.mul(int(a[0, 0]), int(a[1, 1])), F.mul(int(a[0, 1]), int(a[1, 0])))
    d = F.inv(det)
    adj = [[int(a[1, 1]), F.neg(int(a[0, 1]))], [F.neg(int(a[1, 0])), int(a[0, 0])]]
    return np.array([[F.mul(d, x) for x in row] for row in adj], dtype=np.int64)


def hermitian_gram(F: GF, k: int) -> np.ndarray:
    """Alternating F_p-form Tr(delta h(v, w)) on F_{p^2}^k, basis x^r e_i at index 2i + r."""
    zeta = F.generator
    delta = F.sub(zeta, F.frobenius(zeta))
    basis = [F.p**r for r in range(2)]
    gram = np.zeros((2 * k, 2 * k), dtype=np.int64)
    for i in range(k):
        for r, s in itertools.product(range(2), repeat=2):
            val = F.mul(delta, F.mul(basis[r], F.frobenius(basis[s])))
            gram[2 * i + r, 2 * i + s] = F.trace(val)
    return gram


def restrict_scalars(F: GF, g: np.ndarray) -> np.ndarray:
    """F_{p^2}-matrix as an F_p-matrix in the basis x^r e_i (index 2i + r)."""
    k = g.shape[0]
    out = np.zeros((2 * k, 2 * k), dtype=np.int64)
    for i in range(k):
        for r in range(2):
            col = [F.mul(F.p**r, int(g[l, i])) for l in range(k)]
            out[:, 2 * i + r] = np.concatenate([F.vecs[c] for c in col])
    return out


# -- torus factor matrices --------------------------------------------------


def split_generator_matrix(p: int, j: int) -> np.ndarray:
    F = field(p, j)
    return F.regular_matrix(F.generator)


def norm_one_symplectic(p: int, j: int) -> np.ndarray:
    """Generator of f_{2j}^1 acting on F_{p^2j} with the form Tr(delta x conj(y)), symplectic basis."""
    F = field(p, 2 * j)
    zeta = F.generator
    conj = lambda a: F.frobenius(a, j)  # noqa: E731
    delta = F.sub(zeta, conj(zeta))
    basis = [p**a for a in range(2 * j)]
    gram = np.array(
        [[F.trace(F.mul(delta, F.mul(x, conj(y)))) for y in basis] for x in basis], dtype=np.int64
    )
    P = symplectic_basis(gram, p)
    u = F.power(zeta, p**j - 1)
    return mat_inv_mod(P, p) @ F.regular_matrix(u) @ P % p


def _place_symplectic(n: int, offset: int, local: np.ndarray) -> np.ndarray:
    """Put a 2j x 2j symplectic matrix on the hyperbolic pairs offset .. offset + j - 1."""
    j = local.shape[0] // 2
    idx = list(range(offset, offset + j)) + list(range(n + offset, n + offset + j))
    out = np.eye(2 * n, dtype=np.int64)
    out[np.ix_(idx, idx)] = local
    return out


def _place_block(n: int, offset: int, local: np.ndarray) -> np.ndarray:
    j = local.shape[0]
    out = np.eye(n, dtype=np.int64)
    out[offset:offset + j, offset:offset + j] = local
    return out


# -- concrete tori ------------------------------------------------------------


@dataclass
class ConcreteTorus:
    datum: TorusDatum
    generators: list[np.ndarray]
    elements: np.ndarray  # group indices, exponent tuples in C order
    exponents: np.ndarray

    @property
    def order(self) -> int:
        return len(self.elements)

    def character(self, values) -> np.ndarray:
        mods = np.array(self.datum.moduli)
        phase = (self.exponents * np.asarray(values)[None, :] % mods[None, :]) / mods[None, :]
        return np.exp(2j * np.pi * phase.sum(axis=1))

    def exponent_of(self) -> dict[int, tuple[int, ...]]:
        return {int(g): tuple(int(x) for x in e) for g, e in zip(self.elements, self.exponents)}


def _torus_from_generators(group: MatrixGroup, datum: TorusDatum, gens: list[np.ndarray]) -> ConcreteTorus:
    p = group.p
    mods = datum.moduli
    powers = []
    for g, m in zip(gens, mods):
        seq = [np.eye(g.shape[0], dtype=np.int64)]
        for _ in range(m - 1):
            seq.append(seq[-1] @ g % p)
        if not np.array_equal(seq[-1] @ g % p, seq[0]):
            raise ConstructionError(f"torus generator has wrong order on {datum.describe()}")
        powers.append(seq)
    exps = np.array(list(itertools.product(*[range(m) for m in mods])), dtype=np.int64)
    mats = []
    for e in exps:
        acc = np.eye(group.dim, dtype=np.int64)
        for k, a in enumerate(e):
            acc = acc @ powers[k][a] % p
        mats.append(acc)
    idx = group.index_of(np.array(mats))
    if len(set(idx.tolist())) != len(idx):
        raise ConstructionError(f"torus {datum.describe()} is not a direct product of its factors")
    return ConcreteTorus(datum, gens, idx, exps)


def _sp_torus_generators(spec: GroupSpec, datum: TorusDatum) -> list[np.ndarray]:
    n, p = spec.n, spec.q
    gens, offset = [], 0
    for c in datum.coordinates:
        if c.kind is Kind.SPLIT:
            local = levi_embed(split_generator_matrix(p, c.j), p)
        else:
            local = norm_one_symplectic(p, c.j)
        gens.append(_place_symplectic(n, offset, local))
        offset += c.j
    return gens


def _gl_torus_generators(spec: GroupSpec, datum: TorusDatum) -> list[np.ndarray]:
    gens, offset = [], 0
    for c in datum.coordinates:
        gens.append(_place_block(spec.n, offset, split_generator_matrix(spec.q, c.j)))
        offset += c.j
    return gens


# -- unitary groups -------------------------------------------------------------


def _unitary_matrices(F: GF, k: int) -> list[np.ndarray]:
    """All g in GL_k(F_{p^2}) with g^* g = 1 for the standard Hermitian form."""
    conj = F.frobenius
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product(range(F.size), repeat=k)]

    def herm(v, w):
        acc = 0
        for a, b in zip(v, w):
            acc = F.add(acc, F.mul(int(a), conj(int(b))))
        return acc

    units = [v for v in vecs if herm(v, v) == 1]
    if k == 1:
        return [v.reshape(1, 1) for v in units]
    out = []
    for v in units:
        for w in units:
            if herm(v, w) == 0:
                out.append(np.stack([v, w], axis=1))
    return out


@dataclass
class UnitaryModel:
    F: GF
    k: int
    basis_change: np.ndarray  # columns: symplectic basis in the x^r e_i coordinates
    basis_inverse: np.ndarray

    def embed(self, g: np.ndarray) -> np.ndarray:
        p = self.F.p
        return self.basis_inverse @ restrict_scalars(self.F, g) @ self.basis_change % p


def unitary_model(p: int, k: int) -> UnitaryModel:
    F = field(p, 2)
    P = symplectic_basis(hermitian_gram(F, k), p)
    return UnitaryModel(F, k, P, mat_inv_mod(P, p))


def _u2_split_frame(F: GF) -> np.ndarray:
    """Columns v, v' isotropic with h(v, v') = 1."""
    conj = F.frobenius
    minus_one = F.neg(1)
    c = next(x for x in range(1, F.size) if F.mul(x, conj(x)) == minus_one)
    v = (1, c)

    def herm(a, b):
        return F.add(F.mul(a[0], conj(b[0])), F.mul(a[1], conj(b[1])))

    for w in itertools.product(range(F.size), repeat=2):
        if herm(w, w) == 0 and herm(v, w) == 1:
            return np.array([[v[0], w[0]], [v[1], w[1]]], dtype=np.int64)
    raise ConstructionError("no hyperbolic frame found")


def _u_torus_field_generators(F: GF, spec: GroupSpec, datum: TorusDatum) -> list[np.ndarray]:
    zeta = F.generator
    u = F.power(zeta, F.p - 1)
    k = spec.n
    gens = []
    if datum.split:
        if k != 2 or datum.split != {2: 1}:
            raise SizeError(f"unsupported unitary torus {datum.describe()}")
        Q = _u2_split_frame(F)
        d = np.array([[zeta, 0], [0, F.inv(F.frobenius(zeta))]], dtype=np.int64)
        gens.append(fmat_mul(F, fmat_mul(F, Q, d), fmat_inv2(F, Q)))
        return gens
    for i in range(k):
        g = np.eye(k, dtype=np.int64)
        g[i, i] = u
        gens.append(g)
    return gens


# -- small groups ---------------------------------------------------------------


@dataclass
class SmallGroup:
    spec: GroupSpec
    group: MatrixGroup
    tori: dict[TorusDatum, ConcreteTorus]
    sp_indices: np.ndarray | None = None  # image in Sp(V), when realized there
    unitary: UnitaryModel | None = None
    field_elements: list[np.ndarray] | None = None
    _weil: dict = dc_field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def class_sizes(self) -> np.ndarray:
        return self.group.class_sizes

    @property
    def num_classes(self) -> int:
        return self.group.num_classes

    @property
    def split_rank(self) -> int:
        return max(torus_rank(T) for T in self.tori)

    def p_prime_order(self) -> int:
        m = self.order
        while m % self.spec.q == 0:
            m //= self.spec.q
        return m

    def weil_traces(self, scale: int = 1) -> np.ndarray:
        """Trace of the Weil representation for psi(t) = exp(2 pi i scale t / p), per element."""
        scale %= self.spec.q
        if scale not in self._weil:
            if self.spec.family is Family.GL:
                vals = np.array([levi_weil_trace(g, self.spec.q) for g in self.group.elements], dtype=complex)
            else:
                rep = schrodinger_weil(self.symplectic_n, self.spec.q, scale)
                vals = rep.traces[self.sp_indices]
            self._weil[scale] = vals
        return self._weil[scale]

    def weil(self, scale: int = 1) -> np.ndarray:
        return self.group.class_function(self.weil_traces(scale))

    @property
    def symplectic_n(self) -> int:
        return self.spec.n

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return complex(np.sum(self.class_sizes * f * np.conj(g)) / self.order)


def build_group(spec: GroupSpec) -> SmallGroup:
    if not is_supported(spec):
        raise SizeError(f"{spec.label()} is outside the oracle's supported groups")
    key = (spec.family, spec.n, spec.q)
    if key not in _GROUP_CACHE:
        builder = {Family.SP: _build_sp, Family.GL: _build_gl, Family.U: _build_u}[spec.family]
        _GROUP_CACHE[key] = builder(spec)
    return _GROUP_CACHE[key]


_GROUP_CACHE: dict = {}


def _build_sp(spec: GroupSpec) -> SmallGroup:
    group = symplectic_group(spec.n, spec.q)
    tori = {}
    for T in enumerate_torus_classes(spec):
        tori[T] = _torus_from_generators(group, T, _sp_torus_generators(spec, T))
    return SmallGroup(spec, group, tori, sp_indices=np.arange(group.order))


def _build_gl(spec: GroupSpec) -> SmallGroup:
    p = spec.q
    group = generate(f"GL{spec.n}(F_{p})", p, gl_generators(spec.n, p, field(p).generator))
    tori = {T: _torus_from_generators(group, T, _gl_torus_generators(spec, T)) for T in enumerate_torus_classes(spec)}
    return SmallGroup(spec, group, tori)


def _build_u(spec: GroupSpec) -> SmallGroup:
    p, k = spec.q, spec.n
    model = unitary_model(p, k)
    F = model.F
    fmats = _unitary_matrices(F, k)
    embedded = np.array([model.embed(g) for g in fmats])
    group = from_elements(f"U{k}(F_{p})", p, embedded)
    sp = symplectic_group(k, p)
    sp_idx = sp.index_of(embedded)
    tori = {}
    for T in enumerate_torus_classes(spec):
        gens = [model.embed(g) for g in _u_torus_field_generators(F, spec, T)]
        tori[T] = _torus_from_generators(group, T, gens)
    return SmallGroup(spec, group, tori, sp_indices=sp_idx, unitary=model, field_elements=fmats)
