from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fjmult.cyclic import (
    Family,
    Kind,
    check_field,
    factor_order,
    is_regular_residue,
    orbit,
    quadratic_char_index,
    twist_group,
)
from fjmult.errors import InvalidFieldError, UsageError

ODD_Q = st.sampled_from([3, 5, 7, 9, 11, 13, 25, 27])


def test_twist_group_examples():
    g = twist_group(Family.SP, Kind.NORM_ONE, 1, 3)
    assert g.modulus == 4 and g.order == 2 and g.image == {1, 3}
    u = twist_group(Family.U, Kind.NORM_ONE, 1, 3)
    assert u.order == 1 and u.image == {1}
    gl = twist_group(Family.GL, Kind.SPLIT, 2, 3)
    assert gl.modulus == 8 and gl.order == 2 and gl.image == {1, 3}


def test_orbit_examples():
    assert orbit("gal", Kind.NORM_ONE, 1, 5, 1) == {1, 5}
    assert orbit("gamma", Kind.SPLIT, 1, 5, 1) == {1, 3}


def test_regular_residue_examples():
    assert is_regular_residue(2, 3, 1)
    assert not is_regular_residue(1, 5, 3)


def test_sp_split_inversion():
    g = twist_group(Family.SP, Kind.SPLIT, 1, 5)
    assert {1 * m % 4 for m in g.image} == {1, 3}


@pytest.mark.parametrize("q", [1, 2, 4, 6, 15])
def test_bad_fields(q):
    with pytest.raises(InvalidFieldError):
        check_field(q)


def test_unitary_parity_constraint():
    with pytest.raises(UsageError):
        twist_group(Family.U, Kind.SPLIT, 1, 3)
    with pytest.raises(UsageError):
        twist_group(Family.U, Kind.NORM_ONE, 2, 3)


@given(q=ODD_Q, j=st.integers(1, 4), fam=st.sampled_from(list(Family)), kind=st.sampled_from(list(Kind)))
def test_twist_order_is_kappa_j(q, j, fam, kind):
    if fam is Family.GL and kind is Kind.NORM_ONE:
        return
    if fam is Family.U and (kind is Kind.SPLIT) == (j % 2 == 1):
        return
    g = twist_group(fam, kind, j, q)
    assert g.order == fam.kappa * j
    if g.modulus > 2:
        assert len(g.image) == g.order


@given(q=ODD_Q, j=st.integers(1, 3), kind=st.sampled_from(list(Kind)))
def test_quadratic_index_has_order_two(q, j, kind):
    n = factor_order(kind, j, q)
    assert n == (q**j - 1 if kind is Kind.SPLIT else q**j + 1)
    idx = quadratic_char_index(kind, j, q)
    assert idx == n // 2 and 2 * idx % n == 0


@given(q=ODD_Q, j=st.integers(1, 3), c=st.integers(0, 10**6))
def test_orbits_partition(q, j, c):
    n = factor_order(Kind.NORM_ONE, j, q)
    orb = orbit("gal", Kind.NORM_ONE, j, q, c)
    assert all(orbit("gal", Kind.NORM_ONE, j, q, x) == orb for x in orb)
    assert (2 * j) % len(orb) == 0
    assert is_regular_residue(j, q, c) == (len(orb) == 2 * j)
    assert c % n in orb
