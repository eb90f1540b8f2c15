"""``finhom`` command line.

Exit codes: 0 success, 1 internal invariant violation, 2 input error,
3 inconclusive result (a search cap was hit).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .category import FinCat, Functor
from .distance import (
    DistanceReport,
    ccat,
    ccat_functor,
    check_report,
    ctc,
    distance_categorical,
    distance_open,
)
from .errors import FinhomError, InputError, InvariantViolation, SearchCapExceeded
from .fileio import (
    load_map,
    load_structure,
    map_to_json,
    poset_to_json,
    read_json,
)
from .homotopy import DEFAULT_CAP, check_fence, core, homotopic
from .lawcheck import AuditReport, InstanceGenConfig, audit_suite, replay_payload
from .poset import FinPoset, OrderMap, constant_map, identity_map, iter_bits, projections
from .serialize import jsonable
from .simplicial import (
    CONTIGUITY_CAP,
    SMap,
    contiguity_distance,
    contiguous,
    order_complex_map,
    same_contiguity_class,
    stabilize,
    subdivide,
    subdivide_map,
)

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
KINDS = ("D", "cD", "sD", "ccat", "ctc")


class _Outcome:
    def __init__(self, payload: dict, code: int = EXIT_OK):
        self.payload = payload
        self.code = code


# -- loading ---------------------------------------------------------------


def _need(args, name: str, flag: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"this command needs {flag}")
    return value


def _poset(args) -> FinPoset:
    P = load_structure(_need(args, "poset", "-p/--poset"))
    if not isinstance(P, FinPoset):
        raise InputError("-p must name a poset file")
    return P


def _pair(args):
    F = load_map(_need(args, "map_f", "-f/--map-f"))
    G = load_map(_need(args, "map_g", "-g/--map-g"))
    return F, G


def _code_for(*values) -> int:
    return EXIT_INCONCLUSIVE if any(v.is_inconclusive for v in values) else EXIT_OK


# -- witness re-validation -------------------------------------------------


def _revalidate(F, G, report: DistanceReport, cap: int) -> None:
    if isinstance(F, OrderMap):
        ok = check_report(F, G, report, cap=cap)
    else:
        ok = _check_functor_report(F, G, report, cap)
    if not ok:
        raise InvariantViolation(f"{report.kind} witness failed re-validation")


def _expected_parts(report: DistanceReport) -> int | None:
    """Part count the witness must have; 0 when there is nothing to check, -1 when it cannot be right."""
    v = report.value
    if v.is_finite:
        return v.value + 1
    if not report.regions:
        return 0
    return v.upper + 1 if v.is_inconclusive and v.upper is not None else -1


def _check_functor_report(F: Functor, G: Functor, report: DistanceReport, cap: int) -> bool:
    parts = _expected_parts(report)
    if parts == 0:
        return True
    if len(report.regions) != parts:
        return False
    objs = F.domain.objects
    covered = 0
    for r in report.regions:
        covered |= r
    if covered != (1 << len(objs)) - 1:
        return False
    for r in report.regions:
        members = [objs[i] for i in iter_bits(r)]
        f, g = F.restrict(members), G.restrict(members)
        fence = homotopic(f, g, cap=cap)
        if fence is None or not check_fence(fence, f, g):
            return False
    return True


def _check_sd_report(phi: SMap, psi: SMap, report: DistanceReport, cap: int) -> bool:
    parts = _expected_parts(report)
    if parts == 0:
        return True
    K = phi.domain
    covered = 0
    for r in report.regions:
        covered |= r
    if covered != (1 << len(K.facet_masks)) - 1 or len(report.regions) != parts:
        return False
    for r in report.regions:
        chain = same_contiguity_class(phi.restrict(r), psi.restrict(r), cap=cap)
        if chain is None or not all(contiguous(a, b) for a, b in zip(chain, chain[1:])):
            return False
    return True


# -- commands --------------------------------------------------------------


def cmd_validate(args) -> _Outcome:
    out: dict = {"valid": True}
    if args.poset:
        S = load_structure(args.poset)
        if isinstance(S, FinPoset):
            out["poset"] = {"elements": len(S), "hasse": len(S.hasse)}
        elif isinstance(S, FinCat):
            out["category"] = {"objects": len(S.objects), "arrows": len(S.arrows)}
        else:
            out["complex"] = {"vertices": len(S.vertices), "facets": len(S.facet_masks)}
    for flag in ("map_f", "map_g"):
        path = getattr(args, flag)
        if path:
            m = load_map(path)
            out[flag.replace("map_", "map-")] = type(m).__name__
    if len(out) == 1:
        raise InputError("validate needs at least one of -p, -f, -g")
    return _Outcome(out)


def cmd_core(args) -> _Outcome:
    P = _poset(args)
    res = core(P)
    if not check_fence(res.fence, identity_map(P)):
        raise InvariantViolation("core retraction fence failed re-validation")
    removed = [{"element": jsonable(b.element), "kind": b.kind, "target": jsonable(b.target)} for b in res.removal_trace]
    return _Outcome({"core_size": len(res.core), "core": poset_to_json(res.core), "removed": removed})


def cmd_homotopic(args) -> _Outcome:
    F, G = _pair(args)
    if isinstance(F, SMap):
        chain = same_contiguity_class(F, G, cap=args.cap or CONTIGUITY_CAP)
        return _Outcome({"same_contiguity_class": chain is not None, "chain_length": None if chain is None else len(chain) - 1})
    fence = homotopic(F, G, cap=args.cap or DEFAULT_CAP)
    if fence is None:
        return _Outcome({"homotopic": False})
    if not check_fence(fence, F, G):
        raise InvariantViolation("fence failed re-validation")
    return _Outcome({"homotopic": True, "fence": fence.to_json()})


def _distance(kind: str, F, G, cap: int) -> DistanceReport:
    if kind == "D":
        if not isinstance(F, OrderMap):
            raise InputError("D is defined for order maps between posets")
        rep = distance_open(F, G, cap=cap)
    else:
        rep = distance_categorical(F, G, cap=cap)
    _revalidate(F, G, rep, cap)
    return rep


def _sd_report(F, G, cap: int) -> DistanceReport:
    if isinstance(F, OrderMap):
        F, G = order_complex_map(F), order_complex_map(G)
    elif not isinstance(F, SMap):
        raise InputError("sD needs order maps or simplicial maps")
    rep = contiguity_distance(F, G, cap=cap)
    if not _check_sd_report(F, G, rep, cap):
        raise InvariantViolation("sD witness failed re-validation")
    return rep


def cmd_distance(args) -> _Outcome:
    kind = args.kind
    if kind == "ccat":
        return cmd_ccat(args)
    if kind == "ctc":
        return cmd_ctc(args)
    F, G = _pair(args)
    if kind == "sD":
        rep = _sd_report(F, G, args.cap or CONTIGUITY_CAP)
    else:
        rep = _distance(kind, F, G, args.cap or DEFAULT_CAP)
    return _Outcome(rep.to_json(), _code_for(rep.value))


def cmd_sd(args) -> _Outcome:
    F, G = _pair(args)
    rep = _sd_report(F, G, args.cap or CONTIGUITY_CAP)
    return _Outcome(rep.to_json(), _code_for(rep.value))


def cmd_ccat(args) -> _Outcome:
    cap = args.cap or DEFAULT_CAP
    if args.map_f:
        F = load_map(args.map_f)
        rep = ccat_functor(F, cap=cap)
        if isinstance(F, OrderMap):
            _revalidate(F, constant_map(F.domain, F.codomain, F.codomain.elements[0]), rep, cap)
        return _Outcome(rep.to_json(), _code_for(rep.value))
    P = _poset(args)
    rep = ccat(P, cap=cap)
    _revalidate(identity_map(P), constant_map(P, P, P.elements[0]), rep, cap)
    return _Outcome(rep.to_json(), _code_for(rep.value))


def cmd_ctc(args) -> _Outcome:
    cap = args.cap or DEFAULT_CAP
    P = _poset(args)
    rep = ctc(P, cap=cap)
    p1, p2 = projections(P, P)
    _revalidate(p1, p2, rep, cap)
    return _Outcome(rep.to_json(), _code_for(rep.value))


def cmd_subdivide(args) -> _Outcome:
    times = args.times
    if times < 0:
        raise InputError("--times must be non-negative")
    if args.map_f:
        F = load_map(args.map_f)
        if not isinstance(F, OrderMap):
            raise InputError("subdivide works on order maps")
        for _ in range(times):
            F = subdivide_map(F)
        return _Outcome(map_to_json(F))
    P = _poset(args)
    for _ in range(times):
        P = subdivide(P)
    return _Outcome(poset_to_json(P))


def cmd_stabilize(args) -> _Outcome:
    F, G = _pair(args)
    if not isinstance(F, OrderMap):
        raise InputError("stabilize works on order maps")
    res = stabilize(F, G, args.kmax, cap=args.cap or DEFAULT_CAP)
    if not res.interleaving_ok:
        raise InvariantViolation("; ".join(res.violations))
    values = [v for lv in res.levels for v in (lv.D, lv.cD)]
    return _Outcome(res.to_json(), _code_for(*values))


def cmd_chain_report(args) -> _Outcome:
    F, G = _pair(args)
    if not isinstance(F, OrderMap):
        raise InputError("chain-report works on order maps")
    cap = args.cap or DEFAULT_CAP
    sd = _sd_report(F, G, max(cap, CONTIGUITY_CAP)).value
    cd = _distance("cD", F, G, cap).value
    d = _distance("D", F, G, cap).value
    code = _code_for(sd, cd, d)
    out = {"sD": sd.to_json(), "cD": cd.to_json(), "D": d.to_json()}
    if code == EXIT_OK:
        ok = sd.as_number() <= cd.as_number() <= d.as_number()
        out["chain_ok"] = ok
        if not ok:
            return _Outcome(out, EXIT_INVARIANT)
    else:
        out["chain_ok"] = None
    return _Outcome(out, code)


def cmd_audit(args) -> _Outcome:
    if args.replay:
        data = read_json(args.replay)
        entries = data.get("counterexamples", [data]) if isinstance(data, dict) else data
        rows = []
        code = EXIT_OK
        for e in entries:
            for r in replay_payload(e):
                rows.append({"index": e["index"], "law": r.law, "status": r.status, "detail": r.detail})
                if r.status == "failed":
                    code = EXIT_INVARIANT
                elif r.status == "inconclusive" and code == EXIT_OK:
                    code = EXIT_INCONCLUSIVE
        return _Outcome({"replayed": rows}, code)
    config = InstanceGenConfig(
        max_elements=args.max_elements,
        relation_density=args.density,
        seed=args.seed,
        instance_count=args.count,
    )
    report: AuditReport = audit_suite(config)
    payload = report.to_json()
    if args.output:
        Path(args.output).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if report.failures:
        return _Outcome(payload, EXIT_INVARIANT)
    return _Outcome(payload, EXIT_INCONCLUSIVE if report.inconclusive else EXIT_OK)


COMMANDS = {
    "validate": cmd_validate,
    "core": cmd_core,
    "homotopic": cmd_homotopic,
    "distance": cmd_distance,
    "ccat": cmd_ccat,
    "ctc": cmd_ctc,
    "sd": cmd_sd,
    "subdivide": cmd_subdivide,
    "stabilize": cmd_stabilize,
    "audit": cmd_audit,
    "chain-report": cmd_chain_report,
}


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--poset", help="poset (or category/complex) JSON file")
    common.add_argument("-f", "--map-f", dest="map_f", help="first map file")
    common.add_argument("-g", "--map-g", dest="map_g", help="second map file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap", type=int, default=None, help="search cap (visited nodes)")

    parser = argparse.ArgumentParser(prog="finhom", description="Homotopic distances between maps of finite posets.")
    parser.add_argument("--version", action="version", version=f"finhom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "parse and check input files",
        "core": "Stong core of a poset",
        "homotopic": "decide homotopy (or contiguity) with a witness",
        "distance": "D, cD, sD, ccat or ctc",
        "ccat": "categorical LS-category of a poset (-p) or a map (-f)",
        "ctc": "categorical topological complexity of a poset",
        "sd": "contiguity distance of the order-complex maps",
        "subdivide": "barycentric subdivision of a poset or map",
        "stabilize": "distances along iterated subdivisions",
        "audit": "randomized law audit",
        "chain-report": "sD <= cD <= D for a pair of maps",
    }
    subs = {name: sub.add_parser(name, parents=[common], help=h) for name, h in helps.items()}
    subs["distance"].add_argument("--kind", choices=KINDS, required=True)
    subs["subdivide"].add_argument("--times", type=int, default=1, help="number of subdivisions")
    subs["stabilize"].add_argument("--kmax", type=int, default=1)
    a = subs["audit"]
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--count", type=int, default=200)
    a.add_argument("--max-elements", dest="max_elements", type=int, default=6)
    a.add_argument("--density", type=float, default=0.4)
    a.add_argument("--output", help="also write the full report here")
    a.add_argument("--replay", help="replay counterexamples from a report or a single entry")
    return parser


def _render(payload: dict) -> str:
    lines = []
    for k, v in payload.items():
        text = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
        lines.append(f"{k}: {text}")
    return "\n".join(lines)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse already printed the message
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    if getattr(args, "cap", None) is not None and args.cap <= 0:
        print("error: --cap must be positive", file=err)
        return EXIT_INPUT
    try:
        outcome = COMMANDS[args.command](args)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=err)
        return EXIT_INVARIANT
    except SearchCapExceeded as e:
        print(f"inconclusive: {e}", file=err)
        return EXIT_INCONCLUSIVE
    except (InputError, FinhomError) as e:
        print(f"error: {e}", file=err)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(outcome.payload, sort_keys=True), file=out)
    else:
        print(_render(outcome.payload), file=out)
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
