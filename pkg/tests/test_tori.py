from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fjmult.cyclic import Family
from fjmult.errors import UsageError
from fjmult.tori import (
    GroupSpec,
    TorusCharacter,
    TorusDatum,
    all_characters,
    enumerate_torus_classes,
    is_regular_character,
    stabilizer_order,
    torus_rank,
    weyl_act,
    weyl_group,
    weyl_order_formula,
)

GROUPS = st.builds(
    GroupSpec,
    st.sampled_from(list(Family)),
    st.integers(1, 6),
    st.sampled_from([3, 5, 7]),
)


def test_class_counts():
    assert len(enumerate_torus_classes(GroupSpec(Family.SP, 2, 3))) == 5
    assert len(enumerate_torus_classes(GroupSpec(Family.GL, 3, 3))) == 3
    u2 = enumerate_torus_classes(GroupSpec(Family.U, 2, 3))
    assert sorted(T.describe() for T in u2) == ["f1_1^2", "f_2^1"]


def test_weyl_order_examples():
    sp = TorusDatum.make(GroupSpec(Family.SP, 2, 3), {}, {2: 1})
    assert weyl_group(sp).order == 4
    u = TorusDatum.make(GroupSpec(Family.U, 2, 3), {}, {1: 2})
    assert weyl_group(u).order == 2
    for n in range(1, 6):
        gl = TorusDatum.make(GroupSpec(Family.GL, n, 5), {n: 1})
        assert weyl_group(gl).order == n


def test_rank_examples():
    aniso = TorusDatum.make(GroupSpec(Family.SP, 3, 3), {}, {1: 1, 2: 1})
    assert aniso.is_anisotropic and torus_rank(aniso) == 0
    split = TorusDatum.make(GroupSpec(Family.SP, 3, 3), {1: 3})
    assert torus_rank(split) == 3


def test_regular_example():
    T = TorusDatum.make(GroupSpec(Family.SP, 1, 5), {}, {1: 1})
    assert is_regular_character(T, TorusCharacter(T, (1,)))
    assert not is_regular_character(T, TorusCharacter(T, (3,)))


def test_sp_split_inversion():
    T = TorusDatum.make(GroupSpec(Family.SP, 1, 5), {1: 1})
    images = {weyl_act(w, TorusCharacter(T, (1,))).values for w in weyl_group(T)}
    assert images == {(1,), (3,)}


def test_json_round_trip():
    T = TorusDatum.make(GroupSpec(Family.SP, 3, 5), {1: 1}, {1: 2})
    assert TorusDatum.from_json(T.to_json()) == T
    chi = TorusCharacter(T, (1, 2, 5))
    assert TorusCharacter.from_json(T, chi.to_json()) == chi


def test_character_json_missing_coordinate():
    T = TorusDatum.make(GroupSpec(Family.SP, 2, 5), {1: 2})
    with pytest.raises(UsageError):
        TorusCharacter.from_json(T, {"values": [["Split", 1, 0, 1]]})


@given(GROUPS)
def test_njs_weyl_orders(G):
    tori = enumerate_torus_classes(G)
    assert len(set(tori)) == len(tori)
    for T in tori:
        assert weyl_group(T).order == weyl_order_formula(T)
        assert sum(b.j * b.mult for b in T.blocks) == G.n


@given(GROUPS.filter(lambda g: g.n <= 3), st.integers(0, 2**32))
def test_weyl_action_is_a_group_action(G, seed):
    rng = random.Random(seed)
    T = rng.choice(enumerate_torus_classes(G))
    W = weyl_group(T)
    chi = TorusCharacter(T, tuple(rng.randrange(m) for m in T.moduli))
    w1, w2 = W.random(rng), W.random(rng)
    assert weyl_act(W.identity(), chi) == chi
    assert weyl_act(w1, weyl_act(w2, chi)) == weyl_act(W.compose(w1, w2), chi)
    assert weyl_act(W.inverse(w1), weyl_act(w1, chi)) == chi


@given(st.sampled_from(list(Family)), st.integers(1, 2), st.sampled_from([3, 5]))
def test_orbit_stabilizer(fam, n, q):
    for T in enumerate_torus_classes(GroupSpec(fam, n, q)):
        W = list(weyl_group(T))
        for chi in list(all_characters(T))[:12]:
            orbit = {weyl_act(w, chi).values for w in W}
            assert len(orbit) * stabilizer_order(chi) == len(W)
            assert is_regular_character(T, chi) == (stabilizer_order(chi) == 1)
