from __future__ import annotations

from fractions import Fraction

import pytest

from fjmult.cyclic import Family
from fjmult.descent import (
    DescentSpec,
    distinguished_parameter,
    gl_block,
    induce_in_stages,
    pi_components,
    sp_descent_table,
    verify_u_descent,
)
from fjmult.errors import NoDistinguishedError, UsageError
from fjmult.tori import GroupSpec, TorusCharacter, TorusDatum


def test_distinguished_unramified():
    assert distinguished_parameter(3, False, 1, 3) == 1


def test_distinguished_ramified_sign():
    # s of odd residue: theta'(s) = -1, so c_s = 1; even residue flips it
    assert distinguished_parameter(4, True, 1, 3) == 1
    assert distinguished_parameter(4, True, 2, 3) == -1


def test_distinguished_parity_errors():
    with pytest.raises(NoDistinguishedError):
        distinguished_parameter(4, False, 1, 3)
    with pytest.raises(NoDistinguishedError):
        distinguished_parameter(3, True, 1, 3)


def test_distinguished_non_regular():
    with pytest.raises(UsageError):
        distinguished_parameter(2, True, 0, 3)


def test_descent_spec_validation():
    with pytest.raises(UsageError):
        DescentSpec("U", 1, 3, 1)
    with pytest.raises(UsageError):
        DescentSpec("SP", 2, 3, 0)
    spec = DescentSpec("U", 2, 3, 1)
    assert spec.group == GroupSpec(Family.U, 6, 3)
    assert spec.max_level == 3
    assert spec.h_group(1) == GroupSpec(Family.U, 4, 3)
    assert spec.h_group(2) == GroupSpec(Family.U, 2, 3)


def test_pi_components_halves():
    comps = pi_components("U", 2, 3, 1)
    assert [c for c, _, _ in comps["reg"].terms] == [Fraction(1, 2), Fraction(-1, 2)]
    assert [c for c, _, _ in comps["ss"].terms] == [Fraction(1, 2), Fraction(1, 2)]
    sp = pi_components("SP", 2, 3, 1)
    assert [c for c, _, _ in sp["ss"].terms] == [Fraction(-1, 2), Fraction(-1, 2)]


def test_induce_in_stages_unitary():
    tau = gl_block("U", 1, 3, 1)
    H = GroupSpec(Family.U, 4, 3)
    S0 = TorusDatum.make(H, {}, {3: 1, 1: 1})
    S, eta = induce_in_stages([tau, (S0, TorusCharacter(S0, (1, 2)))])
    assert S.group == GroupSpec(Family.U, 6, 3)
    assert S.split == {2: 1} and S.norm_one == {1: 1, 3: 1}
    assert len(eta.values) == 3


def test_induce_in_stages_symplectic():
    tau = gl_block("SP", 2, 3, 1)
    S0 = TorusDatum.make(GroupSpec(Family.SP, 2, 3), {}, {2: 1})
    S, _ = induce_in_stages([tau, (S0, TorusCharacter(S0, (3,)))])
    assert S.group == GroupSpec(Family.SP, 4, 3)
    assert S.split == {2: 1} and S.norm_one == {2: 1}


def test_u_descent_n2_q3():
    rep = verify_u_descent(2, 3, samples=6)
    assert rep["ok"]
    assert rep["part1"]["values"] == [1]
    assert rep["zero"]["values"] == [0]
    assert {(m["m_j0"], m["m_j1"], m["m_Ta"], m["m_pi_ss"]) for m in rep["matching"]} == {(-1, 2, 1, 1)}
    assert len(rep["matching"]) == 4


def test_sp_descent_n2_q3():
    rep = sp_descent_table(2, 3, samples=6)
    assert rep["ok"]
    assert rep["matching"][0]["m_pi_ss"] == 1


def test_sp_descent_conjugate_s():
    # s and its Frobenius conjugate s*q give the same tables
    a = sp_descent_table(2, 3, s=1, samples=4)
    b = sp_descent_table(2, 3, s=3, samples=4)
    assert a["part1"]["values"] == b["part1"]["values"] == [1]
    assert a["matching"][0]["m_pi_ss"] == b["matching"][0]["m_pi_ss"] == 1
