from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from finhom import fixtures
from finhom.errors import CycleError, DuplicateElement, NotMonotone, UnknownElement
from finhom.poset import (
    build_order_map,
    build_poset,
    compose,
    constant_map,
    count_maximal_chains_product,
    diagonal,
    disjoint_union,
    identity_map,
    inclusions,
    is_connected,
    maximal_chain_masks,
    maximal_chains,
    maximal_elements,
    minimal_elements,
    minimal_open,
    opposite,
    product,
    projections,
    up_set,
)
from strategies import posets


def members(sub):
    return set(sub.members)


# -- construction -------------------------------------------------------


def test_chain2(C2):
    assert C2.le(0, 1) and not C2.le(1, 0)


def test_pseudo_circle_has_no_extra_relations(S):
    comparable = {(x, y) for x in S for y in S if x != y and S.le(x, y)}
    assert comparable == {("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")}


def test_w_closure(W):
    assert W.le("x", "w") and W.le("z", "t")
    assert not W.comparable("w", "t") and not W.comparable("x", "y")


def test_cycle_rejected():
    with pytest.raises(CycleError):
        build_poset("ab", [("a", "b"), ("b", "a")])


def test_duplicate_rejected():
    with pytest.raises(DuplicateElement):
        build_poset(["a", "a"])


def test_unknown_in_relation():
    with pytest.raises(UnknownElement):
        build_poset("ab", [("a", "q")])


# -- down-sets, up-sets, opposite ------------------------------------------


@pytest.mark.parametrize(
    "name,y,expected",
    [("S", "c", {"a", "b", "c"}), ("C2", 0, {0}), ("W", "z", {"x", "y", "z"})],
)
def test_minimal_open(name, y, expected, S, C2, W):
    P = {"S": S, "C2": C2, "W": W}[name]
    assert members(minimal_open(P, y)) == expected


@pytest.mark.parametrize(
    "name,x,expected",
    [("S", "a", {"a", "c", "d"}), ("C2", 1, {1}), ("W", "z", {"z", "w", "t"})],
)
def test_up_set(name, x, expected, S, C2, W):
    P = {"S": S, "C2": C2, "W": W}[name]
    assert members(up_set(P, x)) == expected


def test_minimal_open_unknown(S):
    with pytest.raises(UnknownElement):
        minimal_open(S, "zz")


def test_opposite_examples(C2, S, W):
    assert opposite(C2).le(1, 0)
    assert opposite(opposite(S)) == S
    assert set(maximal_elements(opposite(W))) == {"x", "y"}


# -- products ---------------------------------------------------------------


def test_square(C2):
    sq = product(C2, C2)
    assert len(sq) == 4
    assert maximal_elements(sq) == ((1, 1),)


def test_s_squared_chain_count(S):
    """Direct enumeration: 8 maximal chains end at each maximal element, 32 in all."""
    SS = product(S, S)
    chains = maximal_chains(SS)
    assert len(SS) == 16
    assert len(chains) == 32 == count_maximal_chains_product(S, S)
    for top in itertools.product("cd", repeat=2):
        assert sum(1 for c in chains if top in c) == 8


def test_projections_and_inclusions(S):
    SS = product(S, S)
    p1, p2 = projections(S, S, SS)
    assert compose(p1, diagonal(S, SS)) == identity_map(S)
    for base in S:
        i1, i2 = inclusions(S, base, SS)
        assert compose(p2, i2) == identity_map(S)
        assert compose(p1, i1) == identity_map(S)


# -- connectivity and extremal elements ----------------------------------------


def test_connectivity(S, W):
    assert is_connected(S) and is_connected(W)
    assert not is_connected(disjoint_union(fixtures.point(), build_poset(["q"])))


def test_extremal(S, C2, W):
    assert set(maximal_elements(S)) == {"c", "d"}
    assert minimal_elements(C2) == (0,)
    assert set(maximal_elements(W)) == {"w", "t"}


def test_maximal_chains_examples(S, C2, W):
    as_sets = lambda P: {frozenset(c) for c in maximal_chains(P)}
    assert as_sets(S) == {frozenset(p) for p in ("ac", "ad", "bc", "bd")}
    assert as_sets(C2) == {frozenset({0, 1})}
    assert as_sets(W) == {frozenset(p) for p in ("xzw", "xzt", "yzw", "yzt")}


# -- maps -----------------------------------------------------------------------


def test_maps(S, C2):
    identity_map(S)
    build_order_map(S, C2, {"a": 0, "b": 0, "c": 1, "d": 1})
    with pytest.raises(NotMonotone) as info:
        build_order_map(S, S, {"a": "c", "b": "b", "c": "a", "d": "d"})
    assert info.value.pair == ("a", "c")


@given(posets(connected=False), posets(connected=False), st.data())
def test_constant_maps_are_monotone(P, Q, data):
    v = data.draw(st.sampled_from(Q.elements))
    F = constant_map(P, Q, v)
    assert all(F(x) == v for x in P)


# -- properties --------------------------------------------------------------------


@given(posets(max_size=6, connected=False))
def test_leq_iff_down_set_inclusion(P):
    for x in P:
        for y in P:
            assert P.le(x, y) == (members(minimal_open(P, x)) <= members(minimal_open(P, y)))


@given(posets(max_size=6, connected=False))
def test_up_set_is_opposite_down_set(P):
    Pop = opposite(P)
    for x in P:
        assert members(up_set(P, x)) == members(minimal_open(Pop, x))


@given(posets(max_size=6, connected=False))
def test_maximal_chains_cover_and_have_one_max_one_min(P):
    masks = maximal_chain_masks(P)
    assert len(set(masks)) == len(masks)
    union = 0
    for m in masks:
        union |= m
        sub = P.induced(m)
        assert len(maximal_elements(sub)) == 1 and len(minimal_elements(sub)) == 1
        # no element outside the chain extends it
        for i in range(len(P)):
            if not m >> i & 1:
                assert not all(P.comparable(P.elements[i], y) for y in P.members_of(m))
    assert union == P.full_mask


@given(posets(max_size=4, connected=False), posets(max_size=4, connected=False))
def test_projections_monotone_and_jointly_injective(P, Q):
    PQ = product(P, Q)
    p1, p2 = projections(P, Q, PQ)
    seen = set()
    for x in PQ:
        for y in PQ:
            if PQ.le(x, y):
                assert P.le(p1(x), p1(y)) and Q.le(p2(x), p2(y))
        seen.add((p1(x), p2(x)))
    assert len(seen) == len(PQ) == len(P) * len(Q)


@given(posets(max_size=4, connected=False), posets(max_size=4, connected=False))
def test_product_chain_count_two_ways(P, Q):
    assert len(maximal_chains(product(P, Q))) == count_maximal_chains_product(P, Q)
