from __future__ import annotations

import pytest
from hypothesis import given

from finhom import fixtures
from finhom.category import Functor, from_poset, functor_from_order_map, identity_functor
from finhom.errors import SearchCapExceeded
from finhom.homotopy import (
    beat_points,
    check_fence,
    core,
    has_initial_or_terminal,
    hom_components,
    homotopic,
    is_contractible,
    nat_trans_exists,
)
from finhom.poset import OrderMap, compose, constant_map, identity_map, iter_order_maps
from finhom.simplicial import subdivide
from strategies import map_pairs, posets


def test_nat_trans_pointwise(C2):
    lo, hi = constant_map(C2, C2, 0), constant_map(C2, C2, 1)
    assert nat_trans_exists(lo, hi) and not nat_trans_exists(hi, lo)
    assert nat_trans_exists(lo, identity_map(C2))


def test_beat_points(S, C2):
    assert beat_points(S) == []
    assert {b.element for b in beat_points(C2)} == {0, 1}


def test_cores(S, W, C2):
    assert len(core(W).core) == 1
    assert core(S).core == S
    assert len(core(C2).core) == 1
    sdS = subdivide(S)
    assert len(sdS) == 8 and core(sdS).core == sdS


def test_w_has_no_extremes_but_contracts(W):
    assert not has_initial_or_terminal(W)
    assert is_contractible(W)


def test_circle_identity_not_null(S):
    assert homotopic(identity_map(S), constant_map(S, S, "c")) is None


def test_w_everything_homotopic(W):
    idW = identity_map(W)
    for x in W:
        fence = homotopic(idW, constant_map(W, W, x))
        assert fence is not None and check_fence(fence, idW, constant_map(W, W, x))


def test_group_homotopy():
    Z2 = fixtures.z2()
    assert homotopic(identity_functor(Z2), fixtures.trivial_hom(Z2, Z2)) is None
    S3 = fixtures.s3()
    f = fixtures.conjugation(S3, (1, 0, 2))
    g = fixtures.conjugation(S3, (0, 2, 1))
    assert f != g
    assert homotopic(f, g) is not None


def test_functor_homotopy_matches_order_maps(S):
    F = functor_from_order_map(identity_map(S))
    G = functor_from_order_map(constant_map(S, S, "c"))
    assert homotopic(F, G) is None
    K = functor_from_order_map(constant_map(S, S, "d"))
    assert homotopic(G, K) is not None


def test_cap_is_reported(S):
    from finhom.fixtures import chain
    from finhom.poset import build_order_map, product

    Q = product(S, chain(4))
    F = build_order_map(S, Q, {x: (x, 0) for x in S})
    G = constant_map(S, Q, ("c", 0))
    with pytest.raises(SearchCapExceeded):
        homotopic(F, G, cap=5, reduce=False)
    assert homotopic(F, G) is None


# -- properties ------------------------------------------------------------------


@given(posets(max_size=6))
def test_core_is_beat_free_retract(P):
    cr = core(P)
    C = cr.core
    assert len(C) == 1 or beat_points(C) == []
    assert compose(cr.retraction, cr.inclusion) == identity_map(C)
    assert check_fence(cr.fence, identity_map(P), compose(cr.inclusion, cr.retraction))


@given(map_pairs(max_size=4))
def test_search_agrees_with_hom_components(pair):
    F, G = pair
    comp = hom_components(F.domain, F.codomain)
    expected = comp[F.images] == comp[G.images]
    for reduce in (True, False):
        fence = homotopic(F, G, reduce=reduce)
        assert (fence is not None) == expected
        if fence is not None:
            assert check_fence(fence, F, G)


@given(map_pairs(max_size=4))
def test_homotopy_is_symmetric(pair):
    F, G = pair
    assert (homotopic(F, G) is None) == (homotopic(G, F) is None)


@given(posets(max_size=4), posets(max_size=3))
def test_contractible_codomain_makes_all_maps_homotopic(P, Q):
    if not is_contractible(Q):
        return
    maps = [OrderMap(P, Q, m, check=False) for m in iter_order_maps(P, Q)]
    assert all(homotopic(maps[0], m) is not None for m in maps[1:8])
