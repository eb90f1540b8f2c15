"""Randomized audit of the distance inequalities on small connected posets.

Every instance is generated up front from ``(seed, index)`` so a failing law
can be replayed from its coordinates alone.  Laws return one of four
statuses; a law that cannot be evaluated says why.
"""

from __future__ import annotations

import os
import random
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import permutations

from .distance import (
    BRUTE_FORCE_CAP,
    brute_force_distance,
    ccat,
    ccat_functor,
    check_report,
    ctc,
    distance_categorical,
    distance_open,
    inclusions_distance,
)
from .errors import SearchCapExceeded
from .extnat import ExtNat
from .homotopy import _map_neighbors, check_fence, core, homotopic
from .poset import (
    FinPoset,
    OrderMap,
    build_poset,
    compose,
    identity_map,
    is_connected,
    iter_bits,
    maximal_chain_masks,
    maximal_elements,
    minimal_elements,
    opposite_map,
    product,
    product_map,
)
from .serialize import jsonable
from .simplicial import (
    contiguity_distance,
    mccord_fence,
    order_complex_map,
    same_contiguity_class,
    subdivide_map,
)

PASSED, FAILED, SKIPPED, INCONCLUSIVE = "passed", "failed", "skipped", "inconclusive"
PRODUCT_FACTOR_LIMIT = 4
SQUARE_CORE_LIMIT = 4
MAX_RESTARTS = 50
LAYER_DENSITY = 0.6


@dataclass(frozen=True)
class InstanceGenConfig:
    max_elements: int = 6
    relation_density: float = 0.4
    seed: int = 0
    instance_count: int = 200

    def __post_init__(self):
        if self.max_elements < 1:
            raise ValueError("max_elements must be at least 1")
        if not 0.0 <= self.relation_density <= 1.0:
            raise ValueError("relation_density must lie in [0, 1]")
        if self.instance_count < 0:
            raise ValueError("instance_count must be non-negative")


# -- generators ----------------------------------------------------------


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _sample_connected(rng: random.Random, n: int, density: float) -> tuple[FinPoset, int]:
    rejected = 0
    while True:
        rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
        P = build_poset(range(n), rel)
        if is_connected(P):
            return P, rejected
        rejected += 1


def random_poset(config: InstanceGenConfig, *, size: int | None = None, rng=None) -> FinPoset:
    """Connected poset on ``size`` (default ``max_elements``) integer labels.

    Each pair ``i < j`` is related with probability ``relation_density`` before
    closure; disconnected draws are rejected.
    """
    n = config.max_elements if size is None else size
    return _sample_connected(_rng(config.seed if rng is None else rng), n, config.relation_density)[0]


def random_order_map(P: FinPoset, Q: FinPoset, seed) -> OrderMap:
    """Greedy monotone assignment along a linear extension, restarting on dead ends."""
    rng = _rng(seed)
    for _ in range(MAX_RESTARTS):
        images = [0] * len(P)
        for x in P.linear_extension:
            allowed = Q.full_mask
            for y in P.lower_covers[x]:
                allowed &= Q.up[images[y]]
            if not allowed:
                break
            images[x] = rng.choice(list(iter_bits(allowed)))
        else:
            return OrderMap(P, Q, images, check=False)
    return OrderMap(P, Q, [rng.randrange(len(Q))] * len(P), check=False)


def add_beat_point(P: FinPoset, rng: random.Random) -> tuple[FinPoset, OrderMap, OrderMap]:
    """``P`` plus a new down beat point; returns (P+, inclusion P -> P+, retraction P+ -> P)."""
    n = len(P)
    p = rng.randrange(n)
    above = P.up[p] & ~(1 << p)
    U = 0
    for y in iter_bits(above):
        if rng.random() < 0.5:
            U |= P.up[y]
    e = n
    down = [d | (1 << e) if U >> i & 1 else d for i, d in enumerate(P.down)]
    down.append(P.down[p] | 1 << e)
    Pp = FinPoset(list(P.elements) + [("beat", p)], down)
    incl = OrderMap(P, Pp, list(range(n)), check=False)
    retr = OrderMap(Pp, P, list(range(n)) + [p])
    return Pp, incl, retr


@dataclass
class Instance:
    seed: int
    index: int
    P: FinPoset
    Q: FinPoset
    F: OrderMap
    G: OrderMap
    third: OrderMap  # for the triangle inequality
    post: OrderMap  # Q -> R
    pre: OrderMap  # P' -> P
    factor_f: OrderMap  # second factor pair for the product law
    factor_g: OrderMap
    cover_groups: list[int]  # group label per maximal chain of P
    neighbour: OrderMap | None  # single-point move away from F
    p_beat: tuple[FinPoset, OrderMap, OrderMap]
    q_beat: tuple[FinPoset, OrderMap, OrderMap]

    def to_json(self) -> dict:
        def m(f: OrderMap) -> dict:
            return {"domain": _poset_json(f.domain), "codomain": _poset_json(f.codomain), "map": jsonable(f.assignment)}

        return {
            "seed": self.seed,
            "index": self.index,
            "P": _poset_json(self.P),
            "Q": _poset_json(self.Q),
            "F": jsonable(self.F.assignment),
            "G": jsonable(self.G.assignment),
            "third": jsonable(self.third.assignment),
            "post": m(self.post),
            "pre": m(self.pre),
            "factor_f": m(self.factor_f),
            "factor_g": m(self.factor_g),
        }


def _poset_json(P: FinPoset) -> dict:
    return {"elements": jsonable(list(P.elements)), "relations": jsonable([list(h) for h in P.hasse])}


def instance_seed(seed: int, index: int) -> int:
    return seed * 1_000_003 + index


def _layered(rng: random.Random, n: int, density: float) -> tuple[FinPoset, int]:
    """Height-one poset: a random bipartite relation between a lower and an upper layer."""
    rejected = 0
    while True:
        k = rng.randint(1, n - 1)
        rel = [(i, j) for i in range(k) for j in range(k, n) if rng.random() < density]
        P = build_poset(range(n), rel)
        if is_connected(P):
            return P, rejected
        rejected += 1


def _non_contractible(rng: random.Random, n: int) -> tuple[FinPoset, int]:
    rejected = 0
    while True:
        P, r = _layered(rng, rng.randint(4, n), LAYER_DENSITY)
        rejected += r
        if len(core(P).core) > 1:
            return P, rejected
        rejected += 1


def generate_instance(config: InstanceGenConfig, index: int) -> tuple[Instance, int]:
    """The ``index``-th instance of ``config`` and the number of rejected draws.

    Even indices use plain random closures throughout.  Odd indices (when
    ``max_elements >= 4``) draw a non-contractible two-layer domain and study
    self-maps, half of the time against the identity; plain closures alone
    almost never give a nonzero distance at this size.
    """
    rng = random.Random(instance_seed(config.seed, index))
    n, d = config.max_elements, config.relation_density
    rejected = 0

    def poset(limit: int) -> FinPoset:
        nonlocal rejected
        P, r = _sample_connected(rng, rng.randint(1, limit), d)
        rejected += r
        return P

    if index % 2 and n >= 4:
        P, rejected = _non_contractible(rng, n)
        Q = P
        F = identity_map(P) if rng.random() < 0.5 else random_order_map(P, Q, rng)
    else:
        P, Q = poset(n), poset(n)
        F = random_order_map(P, Q, rng)
    G, third = random_order_map(P, Q, rng), random_order_map(P, Q, rng)
    R = poset(n)
    post = random_order_map(Q, R, rng)
    P0 = poset(n)
    pre = random_order_map(P0, P, rng)
    small = min(n, PRODUCT_FACTOR_LIMIT)
    P2, Q2 = poset(small), poset(small)
    factor_f, factor_g = random_order_map(P2, Q2, rng), random_order_map(P2, Q2, rng)
    cover_groups = _chain_partition(rng, len(maximal_chain_masks(P)))
    moves = list(_map_neighbors(P, Q)(F.images))
    neighbour = OrderMap(P, Q, rng.choice(moves), check=False) if moves else None
    p_beat, q_beat = add_beat_point(P, rng), add_beat_point(Q, rng)
    inst = Instance(
        config.seed, index, P, Q, F, G, third, post, pre, factor_f, factor_g, cover_groups, neighbour, p_beat, q_beat
    )
    return inst, rejected


def _chain_partition(rng: random.Random, count: int) -> list[int]:
    """Random labels in 2 or 3 groups, using at least two groups whenever ``count >= 2``."""
    groups = rng.randint(2, 3)
    labels = [rng.randrange(groups) for _ in range(count)]
    if count >= 2 and len(set(labels)) == 1:
        labels[rng.randrange(count)] = (labels[0] + 1) % groups
    return labels


# -- law evaluation ------------------------------------------------------


@dataclass
class LawResult:
    law: str
    status: str
    detail: str = ""


class _Skip(Exception):
    pass


class _Undecided(Exception):
    pass


INF = float("inf")


@dataclass(frozen=True)
class Iv:
    """Closed interval of possible values; exact values have ``lo == hi``."""

    lo: float
    hi: float

    @classmethod
    def of(cls, v) -> Iv:
        if isinstance(v, Iv):
            return v
        if isinstance(v, ExtNat):
            if v.is_inconclusive:
                return cls(v.lower, INF if v.upper is None else v.upper)
            x = v.as_number()
            return cls(x, x)
        return cls(v, v)

    def __add__(self, other) -> Iv:
        o = Iv.of(other)
        return Iv(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __mul__(self, other) -> Iv:
        # all quantities are non-negative
        o = Iv.of(other)
        return Iv(self.lo * o.lo, self.hi * o.hi)

    def __str__(self) -> str:
        return str(int(self.lo)) if self.lo == self.hi and self.lo != INF else f"[{self.lo}, {self.hi}]"


def _le(a, b) -> bool:
    """``a <= b`` if the brackets decide it; raises _Undecided otherwise."""
    x, y = Iv.of(a), Iv.of(b)
    if x.hi <= y.lo:
        return True
    if x.lo > y.hi:
        return False
    raise _Undecided(f"cannot compare {x} with {y}")


def _eq(a, b) -> bool:
    x, y = Iv.of(a), Iv.of(b)
    if x.lo == x.hi == y.lo == y.hi:
        return True
    if x.hi < y.lo or y.hi < x.lo:
        return False
    raise _Undecided(f"cannot compare {x} with {y}")


def _is_zero(v) -> bool:
    return _eq(v, 0)


class _Ctx:
    """Per-instance memo of the distances several laws share."""

    def __init__(self, inst: Instance, square_cache: dict):
        self.inst = inst
        self._memo: dict = {}
        self.square_cache = square_cache

    def get(self, key, fn: Callable):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def D(self, F, G, tag):
        return self.get(("D", tag), lambda: distance_open(F, G, check_connected=False).value)

    def cD(self, F, G, tag):
        return self.get(("cD", tag), lambda: distance_categorical(F, G, check_connected=False).value)

    @property
    def d(self):
        return self.D(self.inst.F, self.inst.G, "FG")

    @property
    def cd(self):
        return self.cD(self.inst.F, self.inst.G, "FG")

    @property
    def ccat_P(self):
        return self.get("ccat_P", lambda: ccat(self.inst.P).value)


def canonical_form(P: FinPoset) -> tuple:
    """Smallest relabelled down-set table; a complete isomorphism invariant for tiny posets."""
    n = len(P)
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for new, old in enumerate(perm):
            inv[old] = new
        table = tuple(sum(1 << inv[j] for j in iter_bits(P.down[perm[i]])) for i in range(n))
        if best is None or table < best:
            best = table
    return best


def law_symmetry(c: _Ctx):
    i = c.inst
    dr, cdr = c.D(i.G, i.F, "GF"), c.cD(i.G, i.F, "GF")
    assert _eq(dr, c.d), f"D(F,G)={c.d} but D(G,F)={dr}"
    assert _eq(cdr, c.cd), f"cD(F,G)={c.cd} but cD(G,F)={cdr}"


def law_zero_iff_homotopic(c: _Ctx):
    h = homotopic(c.inst.F, c.inst.G) is not None
    assert _is_zero(c.cd) == h, f"cD={c.cd}, homotopic={h}"
    assert _is_zero(c.d) == h, f"D={c.d}, homotopic={h}"


def law_homotopy_invariance(c: _Ctx):
    i = c.inst
    if i.neighbour is None:
        raise _Skip("F admits no single-point move")
    d2, cd2 = c.D(i.neighbour, i.G, "nG"), c.cD(i.neighbour, i.G, "nG")
    assert _eq(d2, c.d) and _eq(cd2, c.cd), f"moved F: D {c.d}->{d2}, cD {c.cd}->{cd2}"


def law_subadditivity(c: _Ctx):
    i = c.inst
    chains = maximal_chain_masks(i.P)
    regions = {}
    for ch, g in zip(chains, i.cover_groups):
        regions[g] = regions.get(g, 0) | ch
    if len(regions) < 2:
        raise _Skip("P has a single maximal chain")
    total = Iv.of(len(regions) - 1)
    for r in regions.values():
        total = total + distance_categorical(i.F.restrict(r), i.G.restrict(r), check_connected=False).value
    assert _le(c.cd, total), f"cD={c.cd} > sum over parts + n = {total}"


def law_duality(c: _Ctx):
    i = c.inst
    op = c.cD(opposite_map(i.F), opposite_map(i.G), "op")
    assert _eq(op, c.cd), f"cD={c.cd}, cD(op)={op}"


def law_postcomposition(c: _Ctx):
    i = c.inst
    v = c.cD(compose(i.post, i.F), compose(i.post, i.G), "post")
    assert _le(v, c.cd), f"cD(HF,HG)={v} > cD(F,G)={c.cd}"


def law_precomposition(c: _Ctx):
    i = c.inst
    v = c.cD(compose(i.F, i.pre), compose(i.G, i.pre), "pre")
    assert _le(v, c.cd), f"cD(FK,GK)={v} > cD(F,G)={c.cd}"


def law_domain_bound(c: _Ctx):
    assert _le(c.cd, c.ccat_P), f"cD={c.cd} > ccat(P)={c.ccat_P}"


def _ccat_f(c: _Ctx, which: str):
    f = c.inst.F if which == "F" else c.inst.G
    return c.get(("ccatf", which), lambda: ccat_functor(f).value)


def law_codomain_bound(c: _Ctx):
    rhs = (Iv.of(_ccat_f(c, "F")) + 1) * (Iv.of(_ccat_f(c, "G")) + 1)
    assert _le(Iv.of(c.cd) + 1, rhs), f"cD+1 > {rhs}"


def law_ccat_functor_bounds(c: _Ctx):
    cq = c.get("ccat_Q", lambda: ccat(c.inst.Q).value)
    for w in "FG":
        v = _ccat_f(c, w)
        assert _le(v, c.ccat_P), f"ccat({w})={v} > ccat(P)={c.ccat_P}"
        assert _le(v, cq), f"ccat({w})={v} > ccat(Q)={cq}"


def _square_values(c: _Ctx) -> dict:
    K = core(c.inst.P).core
    if len(K) > SQUARE_CORE_LIMIT:
        raise _Skip(f"core of P has more than {SQUARE_CORE_LIMIT} elements")
    key = canonical_form(K)
    if key not in c.square_cache:
        c.square_cache[key] = {
            "ccat": ccat(K).value,
            "ctc": ctc(K).value,
            "ccat_square": ccat(product(K, K)).value,
            "inclusions": inclusions_distance(K).value,
        }
    return c.square_cache[key]


def law_sandwich(c: _Ctx):
    v = _square_values(c)
    assert _eq(c.ccat_P, v["ccat"]), f"ccat(P)={c.ccat_P} but ccat(core P)={v['ccat']}"
    assert _le(v["ccat"], v["ctc"]), f"ccat={v['ccat']} > ctc={v['ctc']}"
    assert _le(v["ctc"], v["ccat_square"]), f"ctc={v['ctc']} > ccat(PxP)={v['ccat_square']}"


def law_inclusions(c: _Ctx):
    v = _square_values(c)
    assert _eq(v["inclusions"], v["ccat"]), f"cD(i1,i2)={v['inclusions']} vs ccat={v['ccat']}"


def _triangle_holds(c: _Ctx) -> bool:
    i = c.inst
    fh = c.cD(i.F, i.third, "FH")
    gh = c.cD(i.G, i.third, "GH")
    return _le(fh, Iv.of(c.cd) + gh)


def law_triangle(c: _Ctx):
    if not _le(c.ccat_P, 2):
        raise _Skip("ccat(P) > 2; see triangle_watch")
    assert _triangle_holds(c), "cD(F,H) > cD(F,G) + cD(G,H)"


def law_triangle_watch(c: _Ctx):
    """Never fails; records instances outside the proved range where the inequality breaks."""
    if _le(c.ccat_P, 2):
        raise _Skip("ccat(P) <= 2; covered by triangle")
    if not _triangle_holds(c):
        return "candidate counterexample to the unrestricted triangle inequality"
    return None


def law_product(c: _Ctx):
    i = c.inst
    FF, GG = product_map(i.F, i.factor_f), product_map(i.G, i.factor_g)
    for name, dist in (("D", distance_open), ("cD", distance_categorical)):
        lhs = Iv.of(dist(FF, GG, check_connected=False).value) + 1
        a = dist(i.F, i.G, check_connected=False).value
        b = dist(i.factor_f, i.factor_g, check_connected=False).value
        assert _le(lhs, (Iv.of(a) + 1) * (Iv.of(b) + 1)), f"{name}: {lhs} > ({a}+1)({b}+1)"


def law_initial_terminal(c: _Ctx):
    P, Q = c.inst.P, c.inst.Q
    if not any(len(f(X)) == 1 for X in (P, Q) for f in (maximal_elements, minimal_elements)):
        raise _Skip("neither P nor Q has an initial or terminal object")
    assert _is_zero(c.cd) and _is_zero(c.d), f"cD={c.cd}, D={c.d}"


def _sd_value(c: _Ctx):
    i = c.inst
    return c.get("sD", lambda: contiguity_distance(order_complex_map(i.F), order_complex_map(i.G)).value)


def law_chain(c: _Ctx):
    sd = _sd_value(c)
    assert _le(sd, c.cd), f"sD={sd} > cD={c.cd}"
    assert _le(c.cd, c.d), f"cD={c.cd} > D={c.d}"


def law_subdivision(c: _Ctx):
    i = c.inst
    if _le(c.ccat_P, 0):
        # contractible domain: sd of it is contractible too, so both sides vanish
        assert _is_zero(c.cd), f"cD={c.cd} on a contractible domain"
    v = distance_open(subdivide_map(i.F), subdivide_map(i.G), check_connected=False).value
    assert _le(v, c.cd), f"D(sd F, sd G)={v} > cD={c.cd}"


def law_contiguity_lemma(c: _Ctx):
    i = c.inst
    h = homotopic(i.F, i.G) is not None
    chain = same_contiguity_class(order_complex_map(i.F), order_complex_map(i.G))
    if h:
        assert chain is not None, "homotopic maps with κ-images in different contiguity classes"
    if chain is not None:
        fence = mccord_fence(chain)
        assert check_fence(fence, subdivide_map(i.F), subdivide_map(i.G)), "McCord fence does not check"


def law_extremal_elements(c: _Ctx):
    P = c.inst.P
    mx, mn = len(maximal_elements(P)), len(minimal_elements(P))
    assert _le(Iv.of(c.d) + 1, mx), f"D+1 > #max={mx}"
    assert _le(Iv.of(c.cd) + 1, mx), f"cD+1 > #max={mx}"
    assert _le(Iv.of(c.cd) + 1, mn), f"cD+1 > #min={mn}"


def law_equivalence_invariance(c: _Ctx):
    i = c.inst
    _, _, r = i.p_beat
    _, j, _ = i.q_beat
    pairs = {
        "precompose retraction": (compose(i.F, r), compose(i.G, r)),
        "postcompose inclusion": (compose(j, i.F), compose(j, i.G)),
    }
    for name, (f, g) in pairs.items():
        d = distance_open(f, g, check_connected=False).value
        cd = distance_categorical(f, g, check_connected=False).value
        assert _eq(d, c.d) and _eq(cd, c.cd), f"{name}: D {c.d}->{d}, cD {c.cd}->{cd}"


def law_oracle_equivalence(c: _Ctx):
    i = c.inst
    if len(i.P) > BRUTE_FORCE_CAP:
        raise _Skip(f"domain above the brute-force cap of {BRUTE_FORCE_CAP}")
    bo = brute_force_distance(i.F, i.G, "open")
    bg = brute_force_distance(i.F, i.G, "geometric")
    assert _eq(bo, c.d), f"D={c.d}, brute force={bo}"
    assert _eq(bg, c.cd), f"cD={c.cd}, brute force={bg}"


def law_witness(c: _Ctx):
    i = c.inst
    for dist in (distance_open, distance_categorical):
        rep = dist(i.F, i.G, check_connected=False)
        if rep.value.is_inconclusive:
            raise _Undecided(str(rep.value))
        assert check_report(i.F, i.G, rep), f"{rep.kind} witness does not re-validate"


LAWS: dict[str, Callable] = {
    "symmetry": law_symmetry,
    "zero_iff_homotopic": law_zero_iff_homotopic,
    "homotopy_invariance": law_homotopy_invariance,
    "subadditivity": law_subadditivity,
    "duality": law_duality,
    "postcomposition": law_postcomposition,
    "precomposition": law_precomposition,
    "domain_bound": law_domain_bound,
    "codomain_bound": law_codomain_bound,
    "ccat_functor_bounds": law_ccat_functor_bounds,
    "sandwich": law_sandwich,
    "inclusions": law_inclusions,
    "triangle": law_triangle,
    "triangle_watch": law_triangle_watch,
    "product": law_product,
    "initial_terminal": law_initial_terminal,
    "chain": law_chain,
    "subdivision": law_subdivision,
    "contiguity_lemma": law_contiguity_lemma,
    "extremal_elements": law_extremal_elements,
    "equivalence_invariance": law_equivalence_invariance,
    "oracle_equivalence": law_oracle_equivalence,
    "witness": law_witness,
}


def audit_instance(inst: Instance, *, square_cache: dict | None = None, laws=None) -> list[LawResult]:
    return _run(inst, square_cache, laws)[0]


def _run(inst: Instance, square_cache, laws) -> tuple[list[LawResult], str]:
    ctx = _Ctx(inst, {} if square_cache is None else square_cache)
    out = []
    for name in laws or LAWS:
        try:
            note = LAWS[name](ctx)
            out.append(LawResult(name, PASSED, note or ""))
        except _Skip as e:
            out.append(LawResult(name, SKIPPED, str(e)))
        except (_Undecided, SearchCapExceeded) as e:
            out.append(LawResult(name, INCONCLUSIVE, str(e) or type(e).__name__))
        except AssertionError as e:
            out.append(LawResult(name, FAILED, str(e)))
        except Exception as e:  # a crash is a failed law, not an aborted audit
            out.append(LawResult(name, FAILED, f"{type(e).__name__}: {e}"))
    memo = ctx._memo
    profile = f"D={memo.get(('D', 'FG'), '?')} cD={memo.get(('cD', 'FG'), '?')}"
    return out, profile


# -- suite ---------------------------------------------------------------


@dataclass
class LawTally:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    inconclusive: int = 0
    skip_reasons: dict[str, int] = field(default_factory=dict)

    def add(self, r: LawResult) -> None:
        self.checked += 1
        setattr(self, r.status, getattr(self, r.status) + 1)
        if r.status == SKIPPED:
            self.skip_reasons[r.detail] = self.skip_reasons.get(r.detail, 0) + 1


@dataclass
class AuditReport:
    config: InstanceGenConfig
    tallies: dict[str, LawTally] = field(default_factory=dict)
    counterexamples: list[dict] = field(default_factory=list)
    watch: list[dict] = field(default_factory=list)
    instances: int = 0
    rejected_disconnected: int = 0
    oracle_coverage: int = 0
    profile: dict[str, int] = field(default_factory=dict)  # instances per (D, cD) value pair

    @property
    def failures(self) -> int:
        return sum(t.failed for t in self.tallies.values())

    @property
    def inconclusive(self) -> int:
        return sum(t.inconclusive for t in self.tallies.values())

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.inconclusive == 0

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "instances": self.instances,
            "rejected_disconnected": self.rejected_disconnected,
            "oracle_coverage": self.oracle_coverage,
            "profile": dict(sorted(self.profile.items())),
            "laws": {
                name: {
                    "checked": t.checked,
                    "passed": t.passed,
                    "failed": t.failed,
                    "skipped": t.skipped,
                    "inconclusive": t.inconclusive,
                    "skip_reasons": dict(sorted(t.skip_reasons.items())),
                }
                for name, t in self.tallies.items()
            },
            "counterexamples": self.counterexamples,
            "open_question_watch": self.watch,
            "ok": self.ok,
        }


def _audit_index(args) -> tuple[int, int, list[LawResult], dict, str]:
    config, index = args
    inst, rejected = generate_instance(config, index)
    results, profile = _run(inst, _WORKER_CACHE, None)
    notable = any(r.status in (FAILED, INCONCLUSIVE) or (r.status == PASSED and r.detail) for r in results)
    payload = inst.to_json() if notable else {}
    return index, rejected, results, payload, profile


_WORKER_CACHE: dict = {}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FINHOM_THREADS", "1")))
    except ValueError:
        return 1


def audit_suite(config: InstanceGenConfig, *, threads: int | None = None) -> AuditReport:
    """Generate ``config.instance_count`` instances and audit every law on each."""
    report = AuditReport(config, {name: LawTally() for name in LAWS})
    jobs = [(config, k) for k in range(config.instance_count)]
    threads = _threads() if threads is None else threads
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as pool:
            rows = list(pool.map(_audit_index, jobs, chunksize=4))
    else:
        rows = [_audit_index(j) for j in jobs]
    for index, rejected, results, payload, profile in sorted(rows, key=lambda r: r[0]):
        report.instances += 1
        report.profile[profile] = report.profile.get(profile, 0) + 1
        report.rejected_disconnected += rejected
        for r in results:
            report.tallies[r.law].add(r)
            if r.law == "oracle_equivalence" and r.status != SKIPPED:
                report.oracle_coverage += 1
            if r.status in (FAILED, INCONCLUSIVE):
                report.counterexamples.append(
                    {
                        "law": r.law,
                        "status": r.status,
                        "detail": r.detail,
                        "config": asdict(config),
                        "seed": config.seed,
                        "index": index,
                        "instance": payload,
                    }
                )
            elif r.law == "triangle_watch" and r.status == PASSED and r.detail:
                report.watch.append({"seed": config.seed, "index": index, "detail": r.detail, "instance": payload})
    return report


def replay(config: InstanceGenConfig, index: int, law: str | None = None) -> list[LawResult]:
    """Regenerate instance ``index`` of ``config`` and re-run one law (or all)."""
    inst, _ = generate_instance(config, index)
    return audit_instance(inst, laws=None if law is None else [law])


def replay_payload(payload: dict, *, max_elements: int = 6, relation_density: float = 0.4) -> list[LawResult]:
    """Replay a counterexample entry from an audit report."""
    cfg_json = payload.get("config", {})
    config = InstanceGenConfig(
        max_elements=cfg_json.get("max_elements", max_elements),
        relation_density=cfg_json.get("relation_density", relation_density),
        seed=payload["seed"],
        instance_count=payload["index"] + 1,
    )
    return replay(config, payload["index"], payload.get("law"))


__all__ = [
    "AuditReport",
    "Instance",
    "InstanceGenConfig",
    "LAWS",
    "LawResult",
    "LawTally",
    "add_beat_point",
    "audit_instance",
    "audit_suite",
    "canonical_form",
    "generate_instance",
    "random_order_map",
    "random_poset",
    "replay",
    "replay_payload",
]
