from __future__ import annotations

from itertools import combinations

from hypothesis import given, strategies as st

from finhom.cover import (
    GroundSet,
    exact_set_cover,
    ground_set_for_cD,
    ground_set_for_D,
    min_cover,
    poset_goodness,
    validate_witness,
)
from finhom.poset import constant_map, identity_map, iter_bits


def as_sets(P, ground):
    return {frozenset(P.members_of(m)) for m in ground.items}


def test_ground_sets(W, S):
    assert as_sets(W, ground_set_for_D(W)) == {frozenset("xyzw"), frozenset("xyzt")}
    assert len(ground_set_for_cD(W).items) == 4
    assert as_sets(S, ground_set_for_D(S)) == {frozenset("abc"), frozenset("abd")}


def test_single_minimal_open_is_always_good(S, W):
    for P in (S, W):
        good = poset_goodness(identity_map(P), constant_map(P, P, P.elements[0]))
        for m in ground_set_for_D(P).items:
            assert good(m)


def test_circle_cover(S):
    F, G = identity_map(S), constant_map(S, S, "c")
    ground = ground_set_for_cD(S)
    good = poset_goodness(F, G)
    res = min_cover(ground, good)
    assert res.value.value == 1
    assert validate_witness(ground, res.witness, good, 1)


def test_bad_item_gives_infinity():
    ground = GroundSet("maximal_chains", [0b01, 0b10], 2)
    res = min_cover(ground, lambda region: region & 0b10 == 0)
    assert res.value.is_infinite


def test_undecided_region_that_matters_is_inconclusive():
    ground = GroundSet("maximal_chains", [0b001, 0b010, 0b100], 3)

    def good(region):
        if region == 0b111:
            return None
        return bin(region).count("1") <= 1 or region == 0b011

    res = min_cover(ground, good)
    assert res.value.is_inconclusive
    assert (res.value.lower, res.value.upper) == (0, 1)


def test_undecided_region_that_does_not_matter_is_ignored():
    ground = GroundSet("maximal_chains", [0b01, 0b10], 2)
    res = min_cover(ground, lambda region: True if region == 0b11 else None)
    assert res.value.value == 0


# -- oracles --------------------------------------------------------------------


def naive_cover(n, good):
    """Smallest family of item subsets with good regions covering all items, minus one."""
    subsets = [m for m in range(1, 1 << n) if good(m)]
    for k in range(1, n + 1):
        for combo in combinations(subsets, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == (1 << n) - 1:
                return k - 1
    return None


@st.composite
def hereditary_predicates(draw):
    n = draw(st.integers(1, 6))
    generators = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=6))
    return n, generators


@given(hereditary_predicates())
def test_min_cover_matches_naive_oracle(case):
    n, generators = case

    def good(region):
        return any(region & ~g == 0 for g in generators)

    ground = GroundSet("facets", [1 << k for k in range(n)], n)
    res = min_cover(ground, good)
    expected = naive_cover(n, good)
    if expected is None:
        assert res.value.is_infinite
    else:
        assert res.value.value == expected
        assert validate_witness(ground, res.witness, good, expected)


@given(st.integers(1, 7), st.lists(st.integers(1, 127), max_size=7))
def test_exact_set_cover_is_minimum(n, sets):
    full = (1 << n) - 1
    sol = exact_set_cover(full, sets)
    best = None
    for k in range(1, len(sets) + 1):
        if any(_union(c) & full == full for c in combinations(sets, k)):
            best = k
            break
    if best is None:
        assert sol is None
    else:
        assert sol is not None and len(sol) == best and _union(sol) & full == full


def _union(masks):
    acc = 0
    for m in masks:
        acc |= m
    return acc


def test_iter_bits_roundtrip():
    assert list(iter_bits(0b10110)) == [1, 2, 4]
