"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see only the verdicts,
or as part of the full suite (the lines are written past pytest's capture).
"""

from __future__ import annotations

import io
import itertools
import json
import time
from contextlib import contextmanager
from pathlib import Path

from finhom import fixtures
from finhom.category import identity_functor
from finhom.cli import run
from finhom.errors import CycleError
from finhom.distance import (
    brute_force_distance,
    ccat,
    ctc,
    distance_categorical,
    distance_open,
    inclusions_distance,
)
from finhom.homotopy import core, hom_components, homotopic
from finhom.lawcheck import InstanceGenConfig, audit_suite, canonical_form, generate_instance
from finhom.poset import OrderMap, build_poset, constant_map, identity_map, is_connected, iter_order_maps, product
from finhom.simplicial import contiguity_distance, order_complex_map, stabilize

# ctc(S) computed once on the 16-point square and frozen here
FROZEN_CTC_S = 3

DATA = Path(__file__).parent / "data"


@contextmanager
def criterion(number: int, limit_s: float, capsys):
    """Time the block, print the verdict line, and fail if the block raised or ran over."""
    notes: list[str] = []
    start = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed <= limit_s
        verdict = "PASS" if ok and in_time else "FAIL"
        extra = "" if in_time else f" over the {limit_s:g}s limit"
        with capsys.disabled():
            print(f"\nAC{number} {verdict} ({elapsed:.2f}s{extra}) {'; '.join(notes)}")
    assert in_time, f"AC{number} took {elapsed:.2f}s, limit {limit_s}s"


def cd(F, G):
    return distance_categorical(F, G).value


# -- 1 ---------------------------------------------------------------------------


def test_ac1_contractible_w(capsys):
    W, S = fixtures.contractible_five_point(), fixtures.pseudo_circle()
    with criterion(1, 1.0, capsys) as notes:
        assert len(core(W).core) == 1
        assert ccat(W).value.value == 0
        pairs = 0
        for P, Q in ((W, W), (S, W), (W, S)):
            maps = list(iter_order_maps(P, Q))
            for a, b in itertools.combinations(maps, 2):
                pairs += 1
                v = cd(OrderMap(P, Q, a, check=False), OrderMap(P, Q, b, check=False))
                assert v.is_finite and v.value == 0, (P, Q, a, b, v)
        notes.append(f"core 1, ccat 0, cD 0 on all {pairs} pairs W->W, S->W, W->S")


# -- 2 ---------------------------------------------------------------------------------


def test_ac2_groups(capsys):
    with criterion(2, 1.0, capsys) as notes:
        for C in (fixtures.z2(), fixtures.z3()):
            idC, triv = identity_functor(C), fixtures.trivial_hom(C, C)
            assert cd(idC, triv).is_infinite
            assert cd(idC, idC).value == 0 and cd(triv, triv).value == 0
        S3 = fixtures.s3()
        f = fixtures.conjugation(S3, (1, 0, 2))
        g = fixtures.conjugation(S3, (1, 2, 0))
        assert f != g and cd(f, g).value == 0
        notes.append("Z2, Z3: cD(id, trivial) = inf, cD(F, F) = 0; S3 conjugates: 0")


# -- 3 ------------------------------------------------------------------------------------


def test_ac3_pseudo_circle(capsys):
    S = fixtures.pseudo_circle()
    with criterion(3, 5.0, capsys) as notes:
        assert core(S).core == S
        assert ccat(S).value.value == 1
        assert inclusions_distance(S).value.value == 1
        idS, k = identity_map(S), constant_map(S, S, "c")
        assert contiguity_distance(order_complex_map(idS), order_complex_map(k)).value.value == 1
        out = io.StringIO()
        code = run(["chain-report", "-f", str(DATA / "idS.json"), "-g", str(DATA / "constc.json"), "--json"], out, io.StringIO())
        report = json.loads(out.getvalue())
        assert code == 0 and report == {"sD": 1, "cD": 1, "D": 1, "chain_ok": True}
        notes.append("core(S) = S, ccat 1, cD(i1, i2) 1, sD 1, chain-report 1/1/1")


# -- 4 ----------------------------------------------------------------------------------------


def test_ac4_ctc_pseudo_circle(capsys):
    S = fixtures.pseudo_circle()
    with criterion(4, 600.0, capsys) as notes:
        v = ctc(S).value
        upper = ccat(product(S, S)).value
        assert v.is_finite and upper.is_finite
        assert 1 <= v.value <= upper.value <= 3
        assert v.value == FROZEN_CTC_S
        notes.append(f"ctc(S) = {v.value} (frozen {FROZEN_CTC_S}), ccat(SxS) = {upper.value}")


# -- 5 -------------------------------------------------------------------------------------------


def test_ac5_oracle_equivalence(capsys):
    config = InstanceGenConfig(max_elements=5, seed=2024)
    with criterion(5, 600.0, capsys) as notes:
        mismatches, nonzero = [], 0
        for k in range(200):
            inst, _ = generate_instance(config, k)
            F, G = inst.F, inst.G
            assert is_connected(F.domain) and len(F.domain) <= 5
            d, bd = distance_open(F, G).value, brute_force_distance(F, G, "open")
            c, bc = distance_categorical(F, G).value, brute_force_distance(F, G, "geometric")
            if d != bd or c != bc:
                mismatches.append((k, d, bd, c, bc))
            nonzero += d.value != 0
        assert not mismatches, mismatches
        notes.append(f"200 instances, 0 mismatches, {nonzero} with D > 0")


# -- 6 ------------------------------------------------------------------------------------------------


def test_ac6_law_audit(capsys):
    with criterion(6, 1800.0, capsys) as notes:
        report = audit_suite(InstanceGenConfig())
        assert report.instances == 200
        assert report.failures == 0, report.counterexamples[:3]
        assert report.inconclusive == 0, report.counterexamples[:3]
        notes.append(f"{report.instances} instances, 0 failures, 0 inconclusive, {len(report.watch)} watch entries")


# -- 7 -----------------------------------------------------------------------------------------------


def test_ac7_stabilization(capsys):
    S = fixtures.pseudo_circle()
    pairs = [(identity_map(S), constant_map(S, S, "c"))]
    config = InstanceGenConfig(max_elements=5, seed=7)
    pairs += [(inst.F, inst.G) for inst, _ in (generate_instance(config, k) for k in range(10))]
    # beyond the criterion: two pairs from the oracle sample where D and cD differ before subdividing
    extra = InstanceGenConfig(max_elements=5, seed=2024)
    pairs += [(inst.F, inst.G) for inst, _ in (generate_instance(extra, k) for k in (39, 47))]
    with criterion(7, 300.0, capsys) as notes:
        separated = 0
        for F, G in pairs:
            res = stabilize(F, G, 1)
            assert res.interleaving_ok, res.violations
            assert res.stabilized_at is not None and res.stabilized_at <= 1, res.to_json()
            separated += res.levels[0].D != res.levels[0].cD
        assert separated == 2
        notes.append(f"{len(pairs)} pairs stabilize by k = 1 with interleaving intact ({separated} only at k = 1)")


# -- 8 ---------------------------------------------------------------------------------------------------


def connected_posets_up_to(n_max: int) -> list:
    reps: dict = {}
    for n in range(1, n_max + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for bits in range(1 << len(pairs)):
            rel = [p for k, p in enumerate(pairs) if bits >> k & 1]
            try:
                P = build_poset(range(n), rel)
            except CycleError:
                continue
            if is_connected(P):
                reps.setdefault(canonical_form(P), P)
    return list(reps.values())


def test_ac8_single_point_moves_vs_hom_poset(capsys):
    with criterion(8, 600.0, capsys) as notes:
        posets = connected_posets_up_to(4)
        assert len(posets) == 1 + 1 + 3 + 10
        checked, mismatches = 0, []
        for P in posets:
            for Q in posets:
                comp = hom_components(P, Q)
                maps = list(comp)
                for a, b in itertools.combinations(maps, 2):
                    checked += 1
                    found = homotopic(OrderMap(P, Q, a, check=False), OrderMap(P, Q, b, check=False), reduce=False)
                    if (found is not None) != (comp[a] == comp[b]):
                        mismatches.append((P, Q, a, b))
        assert not mismatches, mismatches[:3]
        notes.append(f"{len(posets)} posets, {checked} map pairs, 0 mismatches")
