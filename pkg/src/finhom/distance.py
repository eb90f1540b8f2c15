"""Homotopic distance D, categorical homotopic distance cD and the invariants built on them.

All values are normalized: a cover by ``n + 1`` good parts gives value ``n``.
Order maps are first transported to the cores of their domain and codomain;
the reported witness regions are pulled back to the original domain along the
core retraction, so they can be re-checked against the maps the caller passed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .category import (
    FinCat,
    Functor,
    chain_object_masks,
    constant_functor,
    is_acyclic,
    is_posetal,
    to_poset,
)
from .cover import (
    CoverResult,
    Goodness,
    GroundSet,
    ground_set_for_cD,
    ground_set_for_D,
    ground_set_whole,
    min_cover,
    poset_goodness,
)
from .errors import (
    DomainMismatch,
    NotConnected,
    SearchCapExceeded,
    SizeGuardExceeded,
    UnsupportedCategoryShape,
)
from .extnat import ExtNat
from .homotopy import DEFAULT_CAP, HomotopyFence, check_fence, core, homotopic
from .poset import (
    FinPoset,
    OrderMap,
    SubPoset,
    compose,
    constant_map,
    diagonal,
    identity_map,
    inclusions,
    is_connected,
    is_down_set,
    iter_bits,
    iter_order_maps,
    maximal_chain_masks,
    maximal_elements,
    minimal_elements,
    product,
    projections,
)
from .serialize import jsonable

PRODUCT_SIZE_LIMIT = 400
BRUTE_FORCE_CAP = 6

KIND_D = "D"
KIND_CD = "cD"


@dataclass
class Bound:
    name: str
    lhs: object
    rhs: object
    relation: str = "<="

    @property
    def ok(self) -> bool | None:
        (llo, lhi), (rlo, rhi) = _bracket(self.lhs), _bracket(self.rhs)
        if self.relation == "<=":
            if lhi <= rlo:
                return True
            return False if llo > rhi else None
        if llo == lhi == rlo == rhi:
            return True
        return False if lhi < rlo or rhi < llo else None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": _jsonnum(self.lhs),
            "rhs": _jsonnum(self.rhs),
            "relation": self.relation,
            "ok": self.ok,
        }


def _bracket(v) -> tuple:
    """Lowest and highest possible value of a bound side."""
    if isinstance(v, ExtNat):
        if v.is_inconclusive:
            return v.lower, float("inf") if v.upper is None else v.upper
        v = v.as_number()
    return v, v


def _jsonnum(v):
    return v.to_json() if isinstance(v, ExtNat) else v


@dataclass
class DistanceReport:
    kind: str
    value: ExtNat
    regions: list[int] = field(default_factory=list)  # witness regions, element masks of the original domain
    fences: list = field(default_factory=list)
    domain: object = None  # FinPoset, FinCat or SComplex
    bounds: list[Bound] = field(default_factory=list)
    exact: bool = True
    cover: CoverResult | None = None

    def region_members(self) -> list[tuple]:
        if isinstance(self.domain, FinPoset):
            return [self.domain.members_of(r) for r in self.regions]
        if isinstance(self.domain, FinCat):
            objs = self.domain.objects
            return [tuple(objs[i] for i in iter_bits(r)) for r in self.regions]
        describe = getattr(self.domain, "describe_region", None)
        if describe is not None:
            return [describe(r) for r in self.regions]
        return []

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value.to_json(),
            "witness": {"parts": [{"region": jsonable(list(m))} for m in self.region_members()]},
            "bounds": [b.to_json() for b in self.bounds],
        }
        if not self.exact:
            out["upper_bound_only"] = True
        return out


# -- core routine for order maps --------------------------------------


def _check_pair(F, G) -> None:
    if type(F) is not type(G) or F.domain != G.domain or F.codomain != G.codomain:
        raise DomainMismatch("maps must share domain and codomain")


def _poset_distance(F: OrderMap, G: OrderMap, kind: str, cap: int, check_connected: bool) -> DistanceReport:
    _check_pair(F, G)
    P = F.domain
    if check_connected and not is_connected(P):
        raise NotConnected("the domain must be connected")
    cp, cq = core(P), core(F.codomain)
    Fc = compose(cq.retraction, compose(F, cp.inclusion))
    Gc = compose(cq.retraction, compose(G, cp.inclusion))
    ground = ground_set_for_D(cp.core) if kind == KIND_D else ground_set_for_cD(cp.core)
    good = poset_goodness(Fc, Gc, cap=cap)
    result = min_cover(ground, good)
    regions = []
    if result.witness is not None:
        # pull back along the retraction P -> core(P)
        r = cp.retraction.images
        for reg in result.witness.regions:
            regions.append(sum(1 << i for i, v in enumerate(r) if reg >> v & 1))
    report = DistanceReport(kind, result.value, regions, domain=P, cover=result)
    report.bounds = _cheap_bounds(report, P)
    return report


def _cheap_bounds(report: DistanceReport, P: FinPoset) -> list[Bound]:
    plus_one = _plus_one(report.value)
    bounds = [Bound("MAXIMAL_ELEMENTS", plus_one, len(maximal_elements(P)))]
    if report.kind == KIND_CD:
        bounds.append(Bound("MINIMAL_ELEMENTS", plus_one, len(minimal_elements(P))))
    return bounds


def _plus_one(v: ExtNat):
    if v.is_finite:
        return ExtNat.finite(v.value + 1)
    if v.is_inconclusive:
        return ExtNat.inconclusive(v.lower + 1, None if v.upper is None else v.upper + 1)
    return v


def distance_open(F: OrderMap, G: OrderMap, *, cap: int = DEFAULT_CAP, check_connected: bool = True) -> DistanceReport:
    """Homotopic distance D: least n with an open cover by n + 1 sets on which F and G are homotopic."""
    return _poset_distance(F, G, KIND_D, cap, check_connected)


def distance_categorical(F, G, *, cap: int = DEFAULT_CAP, check_connected: bool = True) -> DistanceReport:
    """Categorical homotopic distance cD of order maps or functors."""
    if isinstance(F, OrderMap):
        return _poset_distance(F, G, KIND_CD, cap, check_connected)
    return _functor_distance(F, G, cap)


def _functor_distance(F: Functor, G: Functor, cap: int) -> DistanceReport:
    _check_pair(F, G)
    C = F.domain
    if C.is_group_like():
        good = Goodness(lambda region: homotopic(F, G, cap=cap))
        result = min_cover(ground_set_whole(), good)
        regions = [] if result.witness is None else [1]
        return DistanceReport(KIND_CD, result.value, regions, domain=C, cover=result)
    if not is_acyclic(C):
        raise UnsupportedCategoryShape("cD is computed for acyclic or one-object group domains")
    if is_posetal(C) and is_posetal(F.codomain):
        from .homotopy import _as_order_map

        rep = _poset_distance(_as_order_map(F), _as_order_map(G), KIND_CD, cap, False)
        rep.domain = C
        return rep
    objs = C.objects

    def test(region: int):
        members = [objs[i] for i in iter_bits(region)]
        return homotopic(F.restrict(members), G.restrict(members), cap=cap)

    ground = GroundSet("maximal-chains", chain_object_masks(C), len(objs))
    result = min_cover(ground, Goodness(test))
    regions = [] if result.witness is None else list(result.witness.regions)
    return DistanceReport(KIND_CD, result.value, regions, domain=C, cover=result, exact=is_posetal(C))


# -- certificate check -------------------------------------------------


def check_report(F: OrderMap, G: OrderMap, report: DistanceReport, *, cap: int = DEFAULT_CAP) -> bool:
    """Re-validate a distance witness on the original domain.

    Open covers for D, geometric covers (every maximal chain inside a part)
    for cD, a verified fence on every part, and ``len(parts) == value + 1``.
    """
    v = report.value
    if v.is_infinite:
        return not report.regions
    if v.is_inconclusive:
        # an undecided value may still carry a witness for its upper end
        if not report.regions:
            return True
        if v.upper is None:
            return False
    P = F.domain
    regions = report.regions
    if len(regions) != (v.value if v.is_finite else v.upper) + 1:
        return False
    covered = 0
    for r in regions:
        covered |= r
    if covered != P.full_mask:
        return False
    if report.kind == KIND_D and not all(is_down_set(P, r) for r in regions):
        return False
    if report.kind == KIND_CD:
        chains = maximal_chain_masks(P)
        if not all(any(c & ~r == 0 for r in regions) for c in chains):
            return False
    for r in regions:
        f, g = F.restrict(r), G.restrict(r)
        fence = homotopic(f, g, cap=cap)
        if fence is None or not check_fence(fence, f, g):
            return False
    return True


# -- derived invariants ------------------------------------------------


def ccat(P: FinPoset, *, base=None, cap: int = DEFAULT_CAP) -> DistanceReport:
    """Categorical LS-category: cD between the identity and a constant map."""
    base = P.elements[0] if base is None else base
    rep = distance_categorical(identity_map(P), constant_map(P, P, base), cap=cap)
    rep.kind = "ccat"
    return rep


def cat_open(P: FinPoset, *, base=None, cap: int = DEFAULT_CAP) -> DistanceReport:
    base = P.elements[0] if base is None else base
    rep = distance_open(identity_map(P), constant_map(P, P, base), cap=cap)
    rep.kind = "cat"
    return rep


def ccat_functor(F, *, cap: int = DEFAULT_CAP, check_connected: bool = True) -> DistanceReport:
    """cD(F, *) with the constant onto the first codomain element."""
    if isinstance(F, OrderMap):
        c = constant_map(F.domain, F.codomain, F.codomain.elements[0])
        rep = distance_categorical(F, c, cap=cap, check_connected=check_connected)
    else:
        c = constant_functor(F.domain, F.codomain, F.codomain.objects[0])
        rep = distance_categorical(F, c, cap=cap)
    rep.kind = "ccat_functor"
    return rep


def _guard_square(P: FinPoset, limit: int) -> None:
    if len(P) ** 2 > limit:
        raise SizeGuardExceeded(f"|P|^2 = {len(P) ** 2} exceeds the product limit {limit}")


def ctc(P: FinPoset, *, cap: int = DEFAULT_CAP, limit: int = PRODUCT_SIZE_LIMIT) -> DistanceReport:
    """Categorical complexity: cD of the two projections ``P × P -> P``."""
    _guard_square(P, limit)
    if not is_connected(P):
        raise NotConnected("the poset must be connected")
    p1, p2 = projections(P, P)
    rep = distance_categorical(p1, p2, cap=cap)
    rep.kind = "ctc"
    return rep


def inclusions_distance(P: FinPoset, base=None, *, cap: int = DEFAULT_CAP, limit: int = PRODUCT_SIZE_LIMIT) -> DistanceReport:
    """cD(i1, i2) for ``i1(c) = (c, base)``, ``i2(c) = (base, c)``."""
    _guard_square(P, limit)
    base = P.elements[0] if base is None else base
    i1, i2 = inclusions(P, base)
    return distance_categorical(i1, i2, cap=cap)


def ccat_inclusions_check(P: FinPoset, base=None, *, cap: int = DEFAULT_CAP) -> bool:
    return inclusions_distance(P, base, cap=cap).value == ccat(P, cap=cap).value


def is_farber_subcategory(P: FinPoset, U: SubPoset, *, cap: int = DEFAULT_CAP) -> OrderMap | None:
    """A map ``s: U -> P`` with ``Δ ∘ s`` homotopic to the inclusion of U in ``P × P``, or None.

    Both restricted projections are tried first, then every order map.
    """
    PP = U.parent
    if len(PP) != len(P) ** 2:
        raise DomainMismatch("U must be a subposet of P × P")
    mask = U.mask
    Uposet = PP.induced(mask)
    incl = OrderMap(Uposet, PP, list(iter_bits(mask)), check=False)
    delta = diagonal(P, PP)
    p1, p2 = projections(P, P, PP)
    tried = set()
    candidates = [p1.restrict(mask).images, p2.restrict(mask).images]
    count = 0
    for images in _chain_iter(candidates, iter_order_maps(Uposet, P)):
        if images in tried:
            continue
        tried.add(images)
        count += 1
        if count > cap:
            raise SearchCapExceeded(f"more than {cap} candidate sections", visited=count)
        s = OrderMap(Uposet, P, images, check=False)
        if homotopic(compose(delta, s), incl, cap=cap) is not None:
            return s
    return None


def _chain_iter(first, rest):
    yield from first
    yield from rest


# -- oracles -----------------------------------------------------------


def brute_force_distance(F: OrderMap, G: OrderMap, mode: str, *, max_elements: int = BRUTE_FORCE_CAP, cap: int = DEFAULT_CAP) -> ExtNat:
    """Minimum over every open cover (``mode="open"``) or every family of full
    subposets forming a geometric cover (``mode="geometric"``); no cores, no
    candidate reduction.
    """
    _check_pair(F, G)
    P = F.domain
    n = len(P)
    if n > max_elements:
        raise SizeGuardExceeded(f"brute force is limited to {max_elements} elements")
    if mode not in ("open", "geometric"):
        raise ValueError("mode must be 'open' or 'geometric'")
    chains = maximal_chain_masks(P)
    full_chains = (1 << len(chains)) - 1
    candidates: dict[int, int] = {}
    undecided = False
    for region in range(1, 1 << n):
        if mode == "open" and not is_down_set(P, region):
            continue
        try:
            ok = homotopic(F.restrict(region), G.restrict(region), cap=cap, reduce=False) is not None
        except SearchCapExceeded:
            undecided = True
            continue
        if not ok:
            continue
        if mode == "open":
            key = region
        else:
            key = sum(1 << k for k, c in enumerate(chains) if c & ~region == 0)
        candidates.setdefault(key, region)
    target = P.full_mask if mode == "open" else full_chains
    keys = list(candidates)
    reach = 0
    for m in keys:
        reach |= m
    if reach != target:
        return ExtNat.inconclusive(0, None) if undecided else ExtNat.infinity()
    for k in range(1, len(keys) + 1):
        for combo in combinations(keys, k):
            acc = 0
            for m in combo:
                acc |= m
            if acc == target:
                if undecided:
                    return ExtNat.inconclusive(0, k - 1)
                return ExtNat.finite(k - 1)
    return ExtNat.inconclusive(0, None) if undecided else ExtNat.infinity()


def ccat_all_bases(P: FinPoset, *, cap: int = DEFAULT_CAP) -> dict:
    """ccat computed against every constant map; the values agree on connected posets."""
    return {x: ccat(P, base=x, cap=cap).value for x in P.elements}


# -- bound report --------------------------------------------------------


def bound_report(F: OrderMap, G: OrderMap, *, cap: int = DEFAULT_CAP) -> list[Bound]:
    """Every inequality that applies to the pair, evaluated at the current instance."""
    P, Q = F.domain, F.codomain
    cd = distance_categorical(F, G, cap=cap).value
    cd_rev = distance_categorical(G, F, cap=cap).value
    d = distance_open(F, G, cap=cap).value
    cat_P = ccat(P, cap=cap).value
    cf = ccat_functor(F, cap=cap).value
    cg = ccat_functor(G, cap=cap).value
    bounds = [
        Bound("SYMMETRY", cd, cd_rev, "="),
        Bound("CATDOM", cd, cat_P),
        Bound("CD_LE_D", cd, d),
        Bound("CODOMAIN", _plus_one(cd), _times(_plus_one(cf), _plus_one(cg))),
        Bound("CCAT_F_LE_CCAT_DOMAIN", cf, cat_P),
        Bound("MAXIMAL_ELEMENTS", _plus_one(cd), len(maximal_elements(P))),
        Bound("MAXIMAL_ELEMENTS_D", _plus_one(d), len(maximal_elements(P))),
        Bound("MINIMAL_ELEMENTS", _plus_one(cd), len(minimal_elements(P))),
    ]
    if is_connected(Q):
        bounds.append(Bound("CCAT_F_LE_CCAT_CODOMAIN", cf, ccat(Q, cap=cap).value))
    return bounds


def _times(a, b):
    if isinstance(a, ExtNat) and a.is_inconclusive or isinstance(b, ExtNat) and b.is_inconclusive:
        return ExtNat.inconclusive(0, None)
    v = _bracket(a)[0] * _bracket(b)[0]
    return ExtNat.infinity() if v == float("inf") else ExtNat.finite(int(v))


__all__ = [
    "Bound",
    "DistanceReport",
    "ExtNat",
    "HomotopyFence",
    "bound_report",
    "brute_force_distance",
    "cat_open",
    "ccat",
    "ccat_all_bases",
    "ccat_functor",
    "ccat_inclusions_check",
    "check_report",
    "ctc",
    "distance_categorical",
    "distance_open",
    "inclusions_distance",
    "is_farber_subcategory",
]
