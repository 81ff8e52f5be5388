from __future__ import annotations

import numpy as np
import pytest

from fjmult.cyclic import Family
from fjmult.errors import SizeError
from fjmult.oracle import build_group, classical_dl_table
from fjmult.oracle.dl import borel_induced, rank_one_dl
from fjmult.oracle.fields import field, legendre
from fjmult.oracle.pairing import pair_multiplicity_bruteforce
from fjmult.oracle.verify import (
    dual_weil_check,
    engine_vs_oracle,
    psi_independence,
    twisted_weil_check,
    weil_check,
    weil_self_pairing,
)
from fjmult.oracle.weilrep import schrodinger_weil, solve_conventions
from fjmult.tori import GroupSpec, TorusDatum


@pytest.mark.parametrize(
    "spec,order",
    [
        (GroupSpec(Family.SP, 1, 5), 120),
        (GroupSpec(Family.SP, 2, 3), 51840),
        (GroupSpec(Family.U, 2, 3), 96),
        (GroupSpec(Family.GL, 2, 3), 48),
        (GroupSpec(Family.U, 1, 5), 6),
    ],
)
def test_group_orders(spec, order):
    G = build_group(spec)
    assert G.order == order
    assert int(G.class_sizes.sum()) == order


def test_unsupported_group():
    with pytest.raises(SizeError):
        build_group(GroupSpec(Family.SP, 3, 3))


def test_field_arithmetic():
    F = field(3, 2)
    assert F.size == 9
    g = F.generator
    assert F.power(g, 8) == 1 and F.power(g, 4) != 1
    assert [legendre(a, 7) for a in range(1, 7)] == [1, 1, -1, 1, -1, -1]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_weil_representation_sp2(p):
    rep = schrodinger_weil(1, p)
    assert rep.residual < 1e-8
    assert abs(rep.traces[0] - p) < 1e-9
    assert len(solve_conventions(1, p)) >= 1


def test_borel_degree():
    G = build_group(GroupSpec(Family.SP, 1, 5))
    T = next(T for T in G.tori if T.split)
    f = borel_induced(G, T, (1,))
    ident = G.group.index_of(np.eye(2, dtype=np.int64))
    assert round(f[G.group.class_of[ident]].real) == 6


def test_dl_orthogonality_non_regular():
    # the quadratic character of the split torus has stabilizer of order 2
    G = build_group(GroupSpec(Family.SP, 1, 5))
    T = next(T for T in G.tori if T.split)
    f = rank_one_dl(G, T, (2,))
    assert round(G.inner(f, f).real) == 2


def test_split_dl_equals_borel_induction():
    G = build_group(GroupSpec(Family.GL, 2, 3))
    table = classical_dl_table(G)
    assert table.diagnostics["borel_max_error"] < 1e-9
    assert not table.missing


def test_sp4_missing_elliptic_tori():
    G = build_group(GroupSpec(Family.SP, 2, 3))
    table = classical_dl_table(G)
    assert sorted(T.describe() for T in table.missing) == ["f1_1^2", "f1_2^1"]
    assert table.diagnostics["route_max_error"] < 1e-9


@pytest.mark.parametrize("q", [3, 5, 7])
def test_weil_self_pairing(q):
    assert weil_self_pairing(GroupSpec(Family.SP, 1, q)) == 2


def test_pairing_gl1_closed_form():
    G = build_group(GroupSpec(Family.GL, 1, 5))
    T = TorusDatum.make(G.spec, {1: 1})
    table = classical_dl_table(G)
    omega = G.weil(1)
    for c in range(4):
        for e in range(4):
            m = pair_multiplicity_bruteforce(G, table.get(T, (c,)), table.get(T, (e,)), omega)
            assert m == 1 + (e == (c + 2) % 4)


@pytest.mark.parametrize("spec", [GroupSpec(Family.SP, 1, 3), GroupSpec(Family.U, 1, 5), GroupSpec(Family.GL, 2, 3)])
def test_weil_checks(spec):
    assert weil_check(spec)["ok"]
    assert dual_weil_check(spec)["ok"]


def test_psi_independence_sp2_5():
    rep = psi_independence(GroupSpec(Family.SP, 1, 5))
    assert rep["weil_differs"] and rep["ok"]


def test_twisted_weil_gl2():
    assert twisted_weil_check(GroupSpec(Family.GL, 2, 3))["ok"]


@pytest.mark.parametrize("q", [3, 5])
def test_engine_vs_oracle_sp2(q):
    rep = engine_vs_oracle(GroupSpec(Family.SP, 1, q))
    assert rep["ok"] and rep["pairs"] == (q - 1 + q + 1) ** 2
