"""Homotopy of order-preserving maps and functors, beat points and Stong cores.

Two order-preserving maps are homotopic iff they lie in the same connected
component of the pointwise-ordered poset of maps.  When ``F <= H`` one can
walk from F to H by changing one value at a time (update a maximal point
where they differ), so it is enough to search the graph whose edges change a
single element's image to a comparable value.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from ._search import bidirectional_path, guided_path
from .category import (
    FinCat,
    Functor,
    is_posetal,
    iter_functors,
    to_poset,
)
from .errors import DomainMismatch, SearchCapExceeded
from .poset import (
    FinPoset,
    OrderMap,
    compose,
    identity_map,
    iter_bits,
    iter_order_maps,
)
from .serialize import jsonable, label

DEFAULT_CAP = 200_000

FORWARD = "forward"
BACKWARD = "backward"


# -- natural transformations ------------------------------------------


def nat_trans_exists(F, G):
    """A natural transformation ``F => G`` if one exists, else None.

    For order maps the only candidate has components ``F(x) <= G(x)``; the
    witness is returned as ``{x: (F(x), G(x))}``.  For functors the components
    are found by backtracking and returned as ``{object: arrow}``.
    """
    _same_ends(F, G)
    if isinstance(F, OrderMap):
        if not F.le(G):
            return None
        return {x: (F(x), G(x)) for x in F.domain.elements}
    return _functor_nat_trans(F, G)


def _same_ends(F, G) -> None:
    if type(F) is not type(G) or F.domain != G.domain or F.codomain != G.codomain:
        raise DomainMismatch("maps must share domain and codomain")


def _functor_nat_trans(F: Functor, G: Functor) -> dict | None:
    C, D = F.domain, F.codomain
    objs = C.objects
    eta: dict = {}

    def natural_at(a) -> bool:
        x, y = C.src[a], C.dst[a]
        return D.compose_table[(G.arrow_map[a], eta[x])] == D.compose_table[(eta[y], F.arrow_map[a])]

    def rec(k: int) -> bool:
        if k == len(objs):
            return True
        x = objs[k]
        for comp in D.hom(F.object_map[x], G.object_map[x]):
            eta[x] = comp
            ok = all(
                natural_at(a)
                for a in C.arrows
                if (C.src[a] == x and C.dst[a] in eta) or (C.dst[a] == x and C.src[a] in eta)
            )
            if ok and rec(k + 1):
                return True
            del eta[x]
        return False

    return dict(eta) if rec(0) else None


# -- fences ------------------------------------------------------------


@dataclass
class HomotopyFence:
    """Zigzag ``F_0 - F_1 - ... - F_m``; ``directions[i]`` is ``"forward"`` for ``F_i => F_{i+1}``."""

    steps: list
    directions: list[str] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.directions)

    def reversed(self) -> HomotopyFence:
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
        return HomotopyFence(self.steps[::-1], [flip[d] for d in reversed(self.directions)])

    def then(self, other: HomotopyFence) -> HomotopyFence:
        if self.steps[-1] != other.steps[0]:
            raise ValueError("fences do not meet")
        return HomotopyFence(self.steps + other.steps[1:], self.directions + other.directions)

    def to_json(self) -> dict:
        return {
            "steps": [_step_json(s) for s in self.steps],
            "directions": list(self.directions),
        }


def _step_json(step) -> dict:
    if isinstance(step, OrderMap):
        return {label(k): jsonable(v) for k, v in step.assignment.items()}
    return {
        "objects": {label(k): jsonable(v) for k, v in step.object_map.items()},
        "arrows": {label(k): jsonable(v) for k, v in step.arrow_map.items()},
    }


def fence_from_path(path: Sequence) -> HomotopyFence:
    dirs = []
    for a, b in zip(path, path[1:]):
        dirs.append(FORWARD if nat_trans_exists(a, b) is not None else BACKWARD)
    return HomotopyFence(list(path), dirs)


def check_fence(fence: HomotopyFence, F=None, G=None) -> bool:
    """Independent certificate check: endpoints, validity of every step, every flagged transformation."""
    steps = fence.steps
    if not steps or len(fence.directions) != len(steps) - 1:
        return False
    if F is not None and steps[0] != F:
        return False
    if G is not None and steps[-1] != G:
        return False
    first = steps[0]
    for s in steps:
        if type(s) is not type(first) or s.domain != first.domain or s.codomain != first.codomain:
            return False
        if isinstance(s, OrderMap):
            try:
                OrderMap(s.domain, s.codomain, s.images)
            except Exception:
                return False
        else:
            try:
                Functor(s.domain, s.codomain, s.object_map, s.arrow_map)
            except Exception:
                return False
    for a, b, d in zip(steps, steps[1:], fence.directions):
        if d == FORWARD:
            src, dst = a, b
        elif d == BACKWARD:
            src, dst = b, a
        else:
            return False
        if isinstance(src, OrderMap):
            cd = src.codomain.down
            if not all(cd[y] >> x & 1 for x, y in zip(src.images, dst.images)):
                return False
        elif _functor_nat_trans(src, dst) is None:
            return False
    return True


def _postcompose(H: OrderMap, fence: HomotopyFence) -> HomotopyFence:
    return HomotopyFence([compose(H, s) for s in fence.steps], list(fence.directions))


def _precompose(fence: HomotopyFence, H: OrderMap) -> HomotopyFence:
    return HomotopyFence([compose(s, H) for s in fence.steps], list(fence.directions))


def _dedupe(fence: HomotopyFence) -> HomotopyFence:
    steps = [fence.steps[0]]
    dirs = []
    for s, d in zip(fence.steps[1:], fence.directions):
        if s == steps[-1]:
            continue
        steps.append(s)
        dirs.append(d)
    return HomotopyFence(steps, dirs)


# -- beat points and cores ---------------------------------------------


@dataclass(frozen=True)
class BeatPoint:
    element: object
    kind: str  # "down": covers exactly one element; "up": covered by exactly one
    target: object


def beat_points(P: FinPoset) -> list[BeatPoint]:
    out = []
    for i, x in enumerate(P.elements):
        lows, ups = P.lower_covers[i], P.upper_covers[i]
        if len(lows) == 1:
            out.append(BeatPoint(x, "down", P.elements[lows[0]]))
        if len(ups) == 1:
            out.append(BeatPoint(x, "up", P.elements[ups[0]]))
    return out


@dataclass
class CoreResult:
    core: FinPoset
    inclusion: OrderMap
    retraction: OrderMap
    removal_trace: list[BeatPoint]
    fence: HomotopyFence  # from id_P to inclusion ∘ retraction


@lru_cache(maxsize=8192)
def core(P: FinPoset) -> CoreResult:
    """Remove the lowest-index beat point until none is left."""
    n = len(P)
    alive = P.full_mask
    images = list(range(n))  # current retraction P -> P, values in alive
    trace: list[BeatPoint] = []
    steps = [identity_map(P)]
    dirs: list[str] = []
    while True:
        sub = P.induced(alive)
        beats = beat_points(sub)
        if not beats or len(sub) == 1:
            break
        bp = beats[0]
        x, t = P.index(bp.element), P.index(bp.target)
        images = [t if v == x else v for v in images]
        alive &= ~(1 << x)
        trace.append(bp)
        steps.append(OrderMap(P, P, images, check=False))
        dirs.append(BACKWARD if bp.kind == "down" else FORWARD)
    C = P.induced(alive)
    keep = list(iter_bits(alive))
    pos = {old: new for new, old in enumerate(keep)}
    inclusion = OrderMap(C, P, keep, check=False)
    retraction = OrderMap(P, C, [pos[v] for v in images], check=False)
    return CoreResult(C, inclusion, retraction, trace, HomotopyFence(steps, dirs))


def is_contractible(P: FinPoset) -> bool:
    return len(core(P).core) == 1


def has_initial_or_terminal(P: FinPoset) -> bool:
    full = P.full_mask
    return any(d == full for d in P.down) or any(u == full for u in P.up)


def reduce_pair_via_cores(F: OrderMap, G: OrderMap) -> tuple[OrderMap, OrderMap]:
    _same_ends(F, G)
    cp, cq = core(F.domain), core(F.codomain)
    return (
        compose(cq.retraction, compose(F, cp.inclusion)),
        compose(cq.retraction, compose(G, cp.inclusion)),
    )


# -- homotopy decision -------------------------------------------------


def _map_neighbors(P: FinPoset, Q: FinPoset):
    lows, ups = P.lower_covers, P.upper_covers
    qdown, qup = Q.down, Q.up
    n = len(P)

    def neighbors(f: tuple):
        for x in range(n):
            cur = f[x]
            allowed = (qdown[cur] | qup[cur]) & ~(1 << cur)
            for y in lows[x]:
                allowed &= qup[f[y]]
            for z in ups[x]:
                allowed &= qdown[f[z]]
            for v in iter_bits(allowed):
                yield f[:x] + (v,) + f[x + 1:]

    return neighbors


def map_path(F: OrderMap, G: OrderMap, cap: int = DEFAULT_CAP) -> list[OrderMap] | None:
    """Single-point-move search between two maps, without core reduction."""
    _same_ends(F, G)
    P, Q = F.domain, F.codomain
    moves = _map_neighbors(P, Q)
    # cheap positive attempt first; the exhaustive search below decides negatives
    path = guided_path(F.images, G.images, moves, cap // 10)
    if path is None:
        path = bidirectional_path(F.images, G.images, moves, cap)
    if path is None:
        return None
    return [OrderMap(P, Q, p, check=False) for p in path]


def homotopic(F, G, *, cap: int = DEFAULT_CAP, reduce: bool = True) -> HomotopyFence | None:
    """A fence from F to G, or None when they are not homotopic.

    Order maps are first transported to the cores of domain and codomain
    (``reduce=False`` skips this).  Raises SearchCapExceeded when the search
    budget runs out: that outcome is undecided, not negative.
    """
    _same_ends(F, G)
    if isinstance(F, OrderMap):
        if F == G:
            return HomotopyFence([F], [])
        if not reduce:
            path = map_path(F, G, cap)
            return None if path is None else fence_from_path(path)
        return _homotopic_via_cores(F, G, cap)
    return _functor_homotopic(F, G, cap)


def _homotopic_via_cores(F: OrderMap, G: OrderMap, cap: int) -> HomotopyFence | None:
    cp, cq = core(F.domain), core(F.codomain)
    Fc = compose(cq.retraction, compose(F, cp.inclusion))
    Gc = compose(cq.retraction, compose(G, cp.inclusion))
    path = map_path(Fc, Gc, cap)
    if path is None:
        return None
    middle = HomotopyFence(
        [compose(cq.inclusion, compose(h, cp.retraction)) for h in path],
        fence_from_path(path).directions,
    )
    return _dedupe(_to_core_side(F, cp, cq).then(middle).then(_to_core_side(G, cp, cq).reversed()))


def _to_core_side(F: OrderMap, cp: CoreResult, cq: CoreResult) -> HomotopyFence:
    """Fence ``F ~ i_Q r_Q F i_P r_P`` built from the two core fences."""
    first = _postcompose(F, cp.fence)  # F -> F i_P r_P
    mid = compose(F, compose(cp.inclusion, cp.retraction))
    second = _precompose(cq.fence, mid)  # F i r -> i_Q r_Q F i r
    return first.then(second)


def _functor_homotopic(F: Functor, G: Functor, cap: int) -> HomotopyFence | None:
    C, D = F.domain, F.codomain
    if F == G:
        return HomotopyFence([F], [])
    if C.is_group_like() and D.is_group_like():
        # functors into a group: every transformation is invertible, so zigzags compose
        eta = _functor_nat_trans(F, G)
        return None if eta is None else HomotopyFence([F, G], [FORWARD])
    if is_posetal(C) and is_posetal(D):
        fence = homotopic(_as_order_map(F), _as_order_map(G), cap=cap)
        if fence is None:
            return None
        return HomotopyFence([_as_functor(s, C, D) for s in fence.steps], list(fence.directions))
    functors = []
    for H in iter_functors(C, D):
        functors.append(H)
        if len(functors) > cap:
            raise SearchCapExceeded(f"more than {cap} functors", visited=len(functors))
    by_key = {H.key(): H for H in functors}

    def neighbors(k):
        H = by_key[k]
        for K in functors:
            if K is not H and (
                _functor_nat_trans(H, K) is not None or _functor_nat_trans(K, H) is not None
            ):
                yield K.key()

    path = bidirectional_path(F.key(), G.key(), neighbors, cap)
    if path is None:
        return None
    return fence_from_path([by_key[k] for k in path])


def _as_order_map(F: Functor) -> OrderMap:
    P, Q = to_poset(F.domain), to_poset(F.codomain)
    return OrderMap(P, Q, [Q.index(F.object_map[x]) for x in P.elements], check=False)


def _as_functor(f: OrderMap, C: FinCat, D: FinCat) -> Functor:
    om = f.assignment
    am = {a: D.hom(om[C.src[a]], om[C.dst[a]])[0] for a in C.arrows}
    return Functor(C, D, om, am, check=False)


# -- brute-force oracle ------------------------------------------------


def hom_components(P: FinPoset, Q: FinPoset) -> dict[tuple, int]:
    """Connected components of the full poset of maps ``P -> Q`` (pointwise order), by union-find."""
    maps = list(iter_order_maps(P, Q))
    parent = list(range(len(maps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    qd = Q.down
    for i, f in enumerate(maps):
        for j in range(i + 1, len(maps)):
            g = maps[j]
            if all(qd[b] >> a & 1 for a, b in zip(f, g)) or all(qd[a] >> b & 1 for a, b in zip(f, g)):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    return {f: find(i) for i, f in enumerate(maps)}
