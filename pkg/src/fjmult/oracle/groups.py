"""Explicit finite matrix groups over F_p with conjugacy classes.

Groups are generated by closure from a generator list.  Elements are
stored as an (N, k, k) integer array; an integer code per matrix gives
vectorised lookup.  Conjugacy classes come from the connected
components of the graph g -> s g s^{-1} over the generators s.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import ConstructionError, SizeError

MAX_GROUP_ORDER = 200_000


def mat_inv_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p by Gauss-Jordan elimination."""
    k = a.shape[0]
    aug = np.concatenate([a % p, np.eye(k, dtype=np.int64)], axis=1)
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r, col] % p), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] * pow(int(aug[col, col]), -1, p) % p
        for r in range(k):
            if r != col and aug[r, col]:
                aug[r] = (aug[r] - aug[r, col] * aug[col]) % p
    return aug[:, k:]


def rank_mod(a: np.ndarray, p: int) -> int:
    m = a.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
        if r == rows:
            break
    return r


def batch_rank_deficiency(mats: np.ndarray, p: int) -> np.ndarray:
    return np.array([mats.shape[1] - rank_mod(m, p) for m in mats], dtype=np.int64)


@dataclass
class MatrixGroup:
    name: str
    p: int
    elements: np.ndarray
    generators: list[np.ndarray]
    parent: np.ndarray
    parent_gen: np.ndarray
    codes: np.ndarray = field(repr=False, default=None)
    _order_idx: np.ndarray = field(repr=False, default=None)
    class_of: np.ndarray = field(repr=False, default=None)
    class_reps: np.ndarray = field(repr=False, default=None)
    class_sizes: np.ndarray = field(repr=False, default=None)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    def encode(self, mats: np.ndarray) -> np.ndarray:
        k = mats.shape[-1]
        weights = self.p ** np.arange(k * k, dtype=np.int64)
        return (mats.reshape(-1, k * k) % self.p) @ weights

    def _build_index(self) -> None:
        self.codes = self.encode(self.elements)
        self._order_idx = np.argsort(self.codes)
        self._sorted = self.codes[self._order_idx]

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        """Indices of the given matrices; raises if any is outside the group."""
        mats = np.asarray(mats)
        single = mats.ndim == 2
        if single:
            mats = mats[None]
        codes = self.encode(mats)
        pos = np.searchsorted(self._sorted, codes)
        pos = np.clip(pos, 0, len(self._sorted) - 1)
        if not np.all(self._sorted[pos] == codes):
            raise ConstructionError(f"matrix not in {self.name}")
        out = self._order_idx[pos]
        return out[0] if single else out

    def contains(self, mats: np.ndarray) -> np.ndarray:
        codes = self.encode(np.asarray(mats).reshape(-1, self.dim, self.dim))
        pos = np.clip(np.searchsorted(self._sorted, codes), 0, len(self._sorted) - 1)
        return self._sorted[pos] == codes

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("...ij,...jk->...ik", a, b) % self.p

    def inverse_indices(self) -> np.ndarray:
        if not hasattr(self, "_inv"):
            k = self.dim
            ident = np.eye(k, dtype=np.int64)
            inv = np.empty(self.order, dtype=np.int64)
            # g^{-1} = g^{m-1} where m is the order of g
            power = self.elements.copy()
            prev = np.broadcast_to(ident, self.elements.shape).copy()
            done = np.zeros(self.order, dtype=bool)
            for _ in range(self.order + 1):
                is_id = np.all(power == ident, axis=(1, 2)) & ~done
                inv[is_id] = self.index_of(prev[is_id]) if is_id.any() else inv[is_id]
                done |= is_id
                if done.all():
                    break
                prev = power
                power = self.multiply(power, self.elements)
            self._inv = inv
        return self._inv

    def element_orders(self) -> np.ndarray:
        if not hasattr(self, "_orders"):
            ident = np.eye(self.dim, dtype=np.int64)
            orders = np.zeros(self.order, dtype=np.int64)
            power = self.elements.copy()
            for k in range(1, self.order + 1):
                hit = (orders == 0) & np.all(power == ident, axis=(1, 2))
                orders[hit] = k
                if np.all(orders):
                    break
                power = self.multiply(power, self.elements)
            self._orders = orders
        return self._orders

    def compute_classes(self) -> None:
        n = self.order
        rows, cols = [], []
        for s in self.generators:
            s_inv = mat_inv_mod(s, self.p)
            conj = self.multiply(self.multiply(s[None], self.elements), s_inv[None])
            rows.append(np.arange(n))
            cols.append(self.index_of(conj))
        graph = coo_matrix(
            (np.ones(sum(len(r) for r in rows)), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n, n),
        )
        _, labels = connected_components(graph, directed=True, connection="weak")
        # relabel classes by their least element index for stable output
        first = {}
        for idx, lab in enumerate(labels):
            first.setdefault(lab, idx)
        ordered = sorted(first, key=first.get)
        remap = {lab: k for k, lab in enumerate(ordered)}
        self.class_of = np.array([remap[l] for l in labels], dtype=np.int64)
        self.class_reps = np.array([first[lab] for lab in ordered], dtype=np.int64)
        self.class_sizes = np.bincount(self.class_of)

    @property
    def num_classes(self) -> int:
        return len(self.class_reps)

    def class_function(self, values_per_element: np.ndarray) -> np.ndarray:
        """Collapse an element-indexed array to class values (checking constancy)."""
        vals = np.asarray(values_per_element)
        reps = vals[self.class_reps]
        if not np.allclose(vals, reps[self.class_of], atol=1e-8):
            raise ConstructionError(f"function is not constant on classes of {self.name}")
        return reps

    def subgroup_indices(self, mask: np.ndarray) -> np.ndarray:
        return np.nonzero(mask)[0]


def generate(name: str, p: int, gens: list[np.ndarray], limit: int = MAX_GROUP_ORDER) -> MatrixGroup:
    """Closure of the generators under right multiplication, with a spanning tree."""
    gens = [np.asarray(g, dtype=np.int64) % p for g in gens]
    k = gens[0].shape[0]
    weights = p ** np.arange(k * k, dtype=np.int64)
    ident = np.eye(k, dtype=np.int64)
    elements = [ident]
    parent, parent_gen = [-1], [-1]
    seen = {int(ident.reshape(-1) @ weights): 0}
    frontier = np.array([0])
    all_elems = ident[None]
    while len(frontier):
        new_idx = []
        current = all_elems[frontier]
        for gi, g in enumerate(gens):
            prods = np.einsum("nij,jk->nik", current, g) % p
            codes = prods.reshape(len(prods), -1) @ weights
            for row, code in enumerate(codes):
                code = int(code)
                if code not in seen:
                    seen[code] = len(elements)
                    elements.append(prods[row])
                    parent.append(int(frontier[row]))
                    parent_gen.append(gi)
                    new_idx.append(seen[code])
            if len(elements) > limit:
                raise SizeError(f"{name} exceeds {limit} elements")
        all_elems = np.array(elements)
        frontier = np.array(new_idx, dtype=np.int64)
    group = MatrixGroup(name, p, all_elems, gens, np.array(parent), np.array(parent_gen))
    group._build_index()
    group.compute_classes()
    return group


def symplectic_form(n: int) -> np.ndarray:
    j = np.zeros((2 * n, 2 * n), dtype=np.int64)
    j[:n, n:] = np.eye(n, dtype=np.int64)
    j[n:, :n] = -np.eye(n, dtype=np.int64)
    return j


def levi_embed(a: np.ndarray, p: int) -> np.ndarray:
    """m(a) = diag(a, a^{-T})."""
    n = a.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    out[:n, :n] = a % p
    out[n:, n:] = mat_inv_mod(a, p).T
    return out


def gl_generators(n: int, p: int, prim: int) -> list[np.ndarray]:
    gens = []
    d = np.eye(n, dtype=np.int64)
    d[0, 0] = prim
    gens.append(d)
    if n > 1:
        e = np.eye(n, dtype=np.int64)
        e[0, 1] = 1
        gens.append(e)
        perm = np.roll(np.eye(n, dtype=np.int64), 1, axis=0)
        gens.append(perm)
        swap = np.eye(n, dtype=np.int64)
        swap[[0, 1]] = swap[[1, 0]]
        gens.append(swap)
    return gens


def siegel_unipotent(b: np.ndarray) -> np.ndarray:
    n = b.shape[0]
    out = np.eye(2 * n, dtype=np.int64)
    out[:n, n:] = b
    return out


def symmetric_basis(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        for j in range(i, n):
            b = np.zeros((n, n), dtype=np.int64)
            b[i, j] = 1
            b[j, i] = 1
            out.append(b)
    return out


def sp_generator_kinds(n: int, p: int, prim: int) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """(kind, small datum, 2n x 2n matrix) for the Levi, unipotent and Weyl generators."""
    out = []
    for a in gl_generators(n, p, prim):
        out.append(("levi", a, levi_embed(a, p)))
    for b in symmetric_basis(n):
        out.append(("unipotent", b, siegel_unipotent(b)))
    out.append(("weyl", None, symplectic_form(n) % p))
    return out


def from_elements(name: str, p: int, elements: np.ndarray, class_generators: list[np.ndarray] | None = None) -> MatrixGroup:
    """Wrap an explicit, closed list of matrices (identity first is not required)."""
    elements = np.asarray(elements, dtype=np.int64) % p
    gens = list(elements) if class_generators is None else [np.asarray(g) % p for g in class_generators]
    group = MatrixGroup(name, p, elements, gens, np.full(len(elements), -1), np.full(len(elements), -1))
    group._build_index()
    closure = group.multiply(elements[:, None], elements[None, :]).reshape(-1, *elements.shape[1:])
    if not group.contains(closure).all():
        raise ConstructionError(f"{name}: element list is not closed under multiplication")
    group.compute_classes()
    return group


def symplectic_basis(gram: np.ndarray, p: int) -> np.ndarray:
    """Columns e_1..e_m, f_1..f_m with <e_i, f_j> = delta_ij for the alternating form."""
    k = gram.shape[0]

    def form(u, v):
        return int(u @ gram @ v) % p

    pool = [np.eye(k, dtype=np.int64)[i] for i in range(k)]
    es, fs = [], []
    while pool:
        pool = [v for v in pool if np.any(v % p)]
        if not pool:
            break
        e = pool[0]
        partner = next((w for w in pool[1:] if form(e, w)), None)
        if partner is None:
            raise ConstructionError("form is degenerate")
        f = partner * pow(form(e, partner), -1, p) % p
        es.append(e)
        fs.append(f)
        rest = []
        for u in pool:
            if u is e or u is partner:
                continue
            rest.append((u - form(u, f) * e + form(u, e) * f) % p)
        pool = rest
    basis = np.array(es + fs, dtype=np.int64).T
    j = symplectic_form(len(es))
    if not np.array_equal(basis.T @ gram @ basis % p, j % p):
        raise ConstructionError("symplectic basis construction failed")
    return basis
