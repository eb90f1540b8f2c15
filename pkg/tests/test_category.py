from __future__ import annotations

from math import gcd

import pytest
from hypothesis import given, strategies as st

from finhom import fixtures
from finhom.category import (
    build_category,
    compose_functors,
    constant_functor,
    cyclic_group_category,
    from_poset,
    functor_from_order_map,
    identity_functor,
    is_acyclic,
    is_geometric_cover,
    iter_functors,
    maximal_composable_chains,
    opposite_category,
    order_map_from_functor,
    to_poset,
)
from finhom.errors import (
    BadEndpoints,
    MissingComposite,
    NotAFunctor,
    NotAPosetCategory,
    NotAssociative,
    UnsupportedCategoryShape,
)
from finhom.poset import iter_order_maps
from strategies import map_pairs, posets


def test_from_poset_s(S):
    C = from_poset(S)
    assert len(C.non_identity_arrows) == 4
    assert to_poset(C) == S


def test_z2_is_not_a_poset():
    with pytest.raises(NotAPosetCategory):
        to_poset(fixtures.z2())


def test_missing_composite():
    with pytest.raises(MissingComposite):
        build_category("xyz", [("f", "x", "y"), ("g", "y", "z")])


def test_non_associative():
    # (t∘s)∘s = s∘s = id but t∘(s∘s) = t
    with pytest.raises(NotAssociative):
        build_category(
            ["*"],
            [("s", "*", "*"), ("t", "*", "*")],
            [("s", "s", "id_*"), ("t", "t", "t"), ("s", "t", "t"), ("t", "s", "s")],
        )


def test_bad_endpoint():
    with pytest.raises(BadEndpoints):
        build_category("x", [("f", "x", "q")])


def test_geometric_cover_examples(S):
    C = from_poset(S)
    assert is_geometric_cover(C, [{"a", "b", "c"}, {"a", "b", "d"}])
    assert not is_geometric_cover(C, [{"a", "c"}, {"b", "d"}])
    Z2 = fixtures.z2()
    assert is_geometric_cover(Z2, [Z2.objects])


def test_geometric_cover_unsupported_shape():
    # two objects swapped by an isomorphism: neither acyclic nor a group
    C = build_category(
        "xy",
        [("f", "x", "y"), ("g", "y", "x")],
        [("g", "f", "id_x"), ("f", "g", "id_y")],
    )
    assert not is_acyclic(C)
    with pytest.raises(UnsupportedCategoryShape):
        is_geometric_cover(C, [{"x", "y"}])


def test_maximal_composable_chains_w(W):
    chains = maximal_composable_chains(from_poset(W))
    assert len(chains) == 4
    assert all(len(c.arrows) == 2 for c in chains)


def test_functor_validation():
    Z2 = fixtures.z2()
    with pytest.raises(NotAFunctor):
        # sending the generator to the identity but the identity to the generator
        from finhom.category import Functor

        Functor(Z2, Z2, {"*": "*"}, {0: 1, 1: 0})


@pytest.mark.parametrize("m,n", [(1, 3), (2, 2), (2, 4), (3, 6), (4, 6)])
def test_group_functor_count_is_gcd(m, n):
    assert sum(1 for _ in iter_functors(cyclic_group_category(m), cyclic_group_category(n))) == gcd(m, n)


@given(posets(max_size=3, connected=False), posets(max_size=3, connected=False))
def test_poset_functors_are_order_maps(P, Q):
    count = sum(1 for _ in iter_functors(from_poset(P), from_poset(Q)))
    assert count == sum(1 for _ in iter_order_maps(P, Q))


@given(posets(max_size=5, connected=False))
def test_poset_category_is_associative_and_roundtrips(P):
    C = from_poset(P)
    comp = C.compose_table
    for (g, f), h in comp.items():
        for k in C.arrows:
            if C.src[k] == C.dst[g]:
                assert comp[(k, h)] == comp[(comp[(k, g)], f)]
    assert to_poset(C) == P
    assert opposite_category(opposite_category(C)).compose_table == comp


@given(map_pairs(max_size=3))
def test_functor_order_map_roundtrip(pair):
    F, _ = pair
    assert order_map_from_functor(functor_from_order_map(F)) == F


def test_functor_composition_identity(S):
    C = from_poset(S)
    idf = identity_functor(C)
    k = constant_functor(C, C, "c")
    assert compose_functors(idf, k) == k
    assert compose_functors(k, idf) == k
