from __future__ import annotations

import json

import pytest
from hypothesis import given

from finhom import fixtures
from finhom.distance import (
    bound_report,
    brute_force_distance,
    cat_open,
    ccat,
    ccat_all_bases,
    ccat_functor,
    ccat_inclusions_check,
    check_report,
    ctc,
    distance_categorical,
    distance_open,
    is_farber_subcategory,
)
from finhom.errors import DomainMismatch, NotConnected, SizeGuardExceeded
from finhom.homotopy import homotopic
from finhom.poset import (
    SubPoset,
    build_poset,
    constant_map,
    diagonal,
    disjoint_union,
    identity_map,
    opposite_map,
    product,
)
from strategies import map_pairs, posets


def value(report):
    return report.value.as_number()


# -- fixture values -----------------------------------------------------------------


def test_w_distances(W):
    idW = identity_map(W)
    for x in W:
        k = constant_map(W, W, x)
        assert value(distance_open(idW, k)) == 0
        assert value(distance_categorical(idW, k)) == 0
    assert value(ccat(W)) == 0


def test_circle_distances(S):
    idS, k = identity_map(S), constant_map(S, S, "c")
    d = distance_open(idS, k)
    cd = distance_categorical(idS, k)
    assert value(d) == 1 and value(cd) == 1
    assert check_report(idS, k, d) and check_report(idS, k, cd)
    assert value(ccat(S)) == 1 and value(cat_open(S)) == 1
    assert value(distance_categorical(idS, idS)) == 0


def test_circle_witness_parts_are_geometric(S):
    idS, k = identity_map(S), constant_map(S, S, "c")
    parts = [set(p) for p in distance_categorical(idS, k).region_members()]
    assert len(parts) == 2
    assert all(len(p) == 3 for p in parts)


def test_group_distances():
    for C in (fixtures.z2(), fixtures.z3()):
        from finhom.category import identity_functor

        idC = identity_functor(C)
        assert distance_categorical(idC, fixtures.trivial_hom(C, C)).value.is_infinite
        assert value(distance_categorical(idC, idC)) == 0
    S3 = fixtures.s3()
    f, g = fixtures.conjugation(S3, (1, 0, 2)), fixtures.conjugation(S3, (1, 2, 0))
    assert value(distance_categorical(f, g)) == 0


def test_ccat_functor_constant(S):
    assert value(ccat_functor(constant_map(S, S, "a"))) == 0
    assert value(ccat_functor(identity_map(S))) == 1


def test_ctc_small(C2):
    assert value(ctc(C2)) == 0


def test_farber_diagonal(S):
    SS = product(S, S)
    U = SubPoset(SS, frozenset(diagonal(S, SS)(x) for x in S))
    assert is_farber_subcategory(S, U) is not None


def test_farber_whole_square_of_contractible(C2):
    CC = product(C2, C2)
    assert is_farber_subcategory(C2, SubPoset(CC, frozenset(CC.elements))) is not None


@pytest.mark.parametrize("name", ["W", "S", "C2"])
def test_inclusions_equal_ccat(name, S, W, C2):
    assert ccat_inclusions_check({"S": S, "W": W, "C2": C2}[name])


def test_bound_report_circle(S):
    bounds = {b.name: b for b in bound_report(identity_map(S), constant_map(S, S, "c"))}
    assert all(b.ok for b in bounds.values())
    assert bounds["CATDOM"].lhs.value == 1 and bounds["CATDOM"].rhs.value == 1
    assert bounds["MAXIMAL_ELEMENTS"].lhs.value == 2 and bounds["MAXIMAL_ELEMENTS"].rhs == 2


def test_brute_force_examples(S, C2):
    assert brute_force_distance(identity_map(S), constant_map(S, S, "c"), "open").value == 1
    assert brute_force_distance(identity_map(C2), constant_map(C2, C2, 0), "geometric").value == 0


def test_brute_force_size_guard():
    from finhom.fixtures import chain

    P = chain(7)
    with pytest.raises(SizeGuardExceeded):
        brute_force_distance(identity_map(P), identity_map(P), "open")


def test_ctc_size_guard(S):
    with pytest.raises(SizeGuardExceeded):
        ctc(S, limit=10)


def test_disconnected_domain_rejected():
    P = disjoint_union(build_poset(["p"]), build_poset(["q"]))
    with pytest.raises(NotConnected):
        distance_open(identity_map(P), identity_map(P))


def test_mismatched_pair(S, C2):
    with pytest.raises(DomainMismatch):
        distance_open(identity_map(S), identity_map(C2))


def test_report_json(S):
    rep = distance_categorical(identity_map(S), constant_map(S, S, "c"))
    out = json.loads(json.dumps(rep.to_json()))
    assert out["kind"] == "cD" and out["value"] == 1
    assert len(out["witness"]["parts"]) == 2
    assert all({"name", "lhs", "rhs", "ok"} <= set(b) for b in out["bounds"])


def test_infinite_json():
    C = fixtures.z2()
    from finhom.category import identity_functor

    rep = distance_categorical(identity_functor(C), fixtures.trivial_hom(C, C))
    assert rep.to_json()["value"] == "inf"


# -- properties ------------------------------------------------------------------------


@given(map_pairs(max_size=4))
def test_matches_brute_force(pair):
    F, G = pair
    assert distance_open(F, G).value == brute_force_distance(F, G, "open")
    assert distance_categorical(F, G).value == brute_force_distance(F, G, "geometric")


@given(map_pairs(max_size=4))
def test_symmetry_duality_and_zero(pair):
    F, G = pair
    cd = distance_categorical(F, G).value
    assert cd == distance_categorical(G, F).value
    assert cd == distance_categorical(opposite_map(F), opposite_map(G)).value
    assert distance_open(F, G).value == distance_open(G, F).value
    assert (cd.value == 0) == (homotopic(F, G) is not None)


@given(map_pairs(max_size=4))
def test_ordering_and_domain_bound(pair):
    F, G = pair
    cd = value(distance_categorical(F, G))
    d = value(distance_open(F, G))
    assert cd <= d
    assert cd <= value(ccat(F.domain))


@given(map_pairs(max_size=4))
def test_witnesses_check_out(pair):
    F, G = pair
    for rep in (distance_open(F, G), distance_categorical(F, G)):
        assert check_report(F, G, rep)


@given(posets(max_size=5))
def test_ccat_base_independent(P):
    assert len({v.to_json().__repr__() for v in ccat_all_bases(P).values()}) == 1


@given(map_pairs(max_size=4))
def test_bound_report_never_violated(pair):
    F, G = pair
    assert all(b.ok is not False for b in bound_report(F, G))
