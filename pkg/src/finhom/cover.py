"""Candidate parts for distance computations and an exact minimum-cover search.

A ground set is a list of *items*, each a bitmask over *atoms* (poset
elements, category objects or facet indices).  A part is a set of items; its
region is the union of their atoms.  Goodness of regions is hereditary, so an
optimal cover can always be built from inclusion-maximal good parts.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

from .errors import SearchCapExceeded
from .extnat import ExtNat
from .homotopy import DEFAULT_CAP, HomotopyFence, homotopic
from .poset import FinPoset, OrderMap, SubPoset, iter_bits, maximal_chain_masks, popcount

MAXIMAL_ELEMENTS = "maximal-elements"
MAXIMAL_CHAINS = "maximal-chains"
FACETS = "facets"
WHOLE = "whole"


@dataclass
class GroundSet:
    kind: str
    items: list[int]
    atom_count: int

    def __post_init__(self):
        seen = set()
        deduped = []
        for m in self.items:
            if m not in seen:
                seen.add(m)
                deduped.append(m)
        self.items = deduped

    @property
    def full(self) -> int:
        return (1 << len(self.items)) - 1

    def region(self, part: int) -> int:
        r = 0
        for i in iter_bits(part):
            r |= self.items[i]
        return r

    def closure(self, part: int) -> int:
        """All items contained in the region of ``part``."""
        r = self.region(part)
        out = part
        for i, m in enumerate(self.items):
            if m & ~r == 0:
                out |= 1 << i
        return out


def ground_set_for_D(P: FinPoset) -> GroundSet:
    """Minimal open sets of the maximal elements."""
    items = [P.down[i] for i in range(len(P)) if not P.upper_covers[i]]
    return GroundSet(MAXIMAL_ELEMENTS, items, len(P))


def ground_set_for_cD(P: FinPoset) -> GroundSet:
    return GroundSet(MAXIMAL_CHAINS, maximal_chain_masks(P), len(P))


def ground_set_for_facets(facet_count: int) -> GroundSet:
    return GroundSet(FACETS, [1 << k for k in range(facet_count)], facet_count)


def ground_set_whole() -> GroundSet:
    return GroundSet(WHOLE, [1], 1)


class Goodness:
    """Memoized region predicate: True, False, or None when the test hit its search cap."""

    def __init__(self, test: Callable[[int], HomotopyFence | None]):
        self._test = test
        self.memo: dict[int, bool | None] = {}
        self.fences: dict[int, object] = {}
        self.tests_run = 0

    def __call__(self, region: int) -> bool | None:
        try:
            return self.memo[region]
        except KeyError:
            pass
        self.tests_run += 1
        try:
            fence = self._test(region)
        except SearchCapExceeded:
            self.memo[region] = None
            return None
        ok = fence is not None
        self.memo[region] = ok
        if ok:
            self.fences[region] = fence
        return ok


def poset_goodness(F: OrderMap, G: OrderMap, *, cap: int = DEFAULT_CAP, reduce: bool = True) -> Goodness:
    """Goodness of full subposets of ``F.domain`` (regions are element masks)."""

    def test(region: int):
        return homotopic(F.restrict(region), G.restrict(region), cap=cap, reduce=reduce)

    return Goodness(test)


def goodness_test(F: OrderMap, G: OrderMap, region: SubPoset, *, cap: int = DEFAULT_CAP) -> bool:
    """Whether F and G restricted to ``region`` are homotopic; raises SearchCapExceeded if undecided."""
    if not region.members:
        raise ValueError("region must be nonempty")
    fence = homotopic(F.restrict(region.mask), G.restrict(region.mask), cap=cap)
    return fence is not None


@dataclass
class CoverWitness:
    parts: list[int]  # item masks
    regions: list[int]  # atom masks
    fences: list = field(default_factory=list)

    def to_json(self, ground: GroundSet, atom_label: Callable[[int], object]) -> dict:
        return {
            "ground": ground.kind,
            "parts": [
                {
                    "items": list(iter_bits(p)),
                    "region": [atom_label(a) for a in iter_bits(r)],
                }
                for p, r in zip(self.parts, self.regions)
            ],
        }


@dataclass
class CoverResult:
    value: ExtNat
    witness: CoverWitness | None
    maximal_parts: list[int] = field(default_factory=list)
    stats: dict = field(default_factory=dict)


def maximal_good_parts(ground: GroundSet, good: Callable[[int], bool | None], *, optimistic: bool) -> list[int]:
    """Inclusion-maximal closed item sets whose regions are good.

    Unknown goodness counts as good when ``optimistic`` and as bad otherwise.
    """

    def ok(part: int) -> bool:
        g = good(ground.region(part))
        return bool(g) if g is not None else optimistic

    n = len(ground.items)
    seen: set[int] = set()
    stack = []
    for i in range(n):
        c = ground.closure(1 << i)
        if c not in seen and ok(c):
            seen.add(c)
            stack.append(c)
    maximal = []
    while stack:
        X = stack.pop()
        extended = False
        tried: set[int] = set()
        for i in range(n):
            if X >> i & 1:
                continue
            Y = ground.closure(X | 1 << i)
            if Y in tried:
                continue
            tried.add(Y)
            if Y in seen:
                extended = True
                continue
            if ok(Y):
                extended = True
                seen.add(Y)
                stack.append(Y)
        if not extended:
            maximal.append(X)
    maximal.sort(key=lambda m: (-popcount(m), m))
    return maximal


def exact_set_cover(full: int, sets: list[int]) -> list[int] | None:
    """Minimum number of ``sets`` whose union is ``full`` (branch and bound); None if impossible."""
    union = 0
    for s in sets:
        union |= s
    if union & full != full:
        return None
    if full == 0:
        return []
    by_item: dict[int, list[int]] = {}
    for i in iter_bits(full):
        by_item[i] = [s for s in sets if s >> i & 1]
    largest = max(popcount(s & full) for s in sets)

    # greedy upper bound
    best: list[int] = []
    left = full
    while left:
        s = max(sets, key=lambda s: popcount(s & left))
        best.append(s)
        left &= ~s
    best_len = [len(best)]
    best_sol = [best]

    def rec(left: int, chosen: list[int]) -> None:
        if not left:
            if len(chosen) < best_len[0]:
                best_len[0] = len(chosen)
                best_sol[0] = list(chosen)
            return
        need = -(-popcount(left) // largest)
        if len(chosen) + need >= best_len[0]:
            return
        pivot = min(iter_bits(left), key=lambda i: len(by_item[i]))
        cands = sorted(by_item[pivot], key=lambda s: -popcount(s & left))
        for s in cands:
            chosen.append(s)
            rec(left & ~s, chosen)
            chosen.pop()

    rec(full, [])
    return best_sol[0]


def min_cover(ground: GroundSet, good: Callable[[int], bool | None]) -> CoverResult:
    """Exact minimum number of good parts covering the ground items, minus one.

    Returns Infinity when some single item is already bad.  Capped goodness
    tests only matter if they can change the optimum; in that case the result
    is an inconclusive bracket.
    """
    n = len(ground.items)
    full = ground.full
    if n == 0:
        return CoverResult(ExtNat.finite(0), CoverWitness([], []))
    whole = good(ground.region(full))
    if whole:
        return _result(ground, good, [full], [full])
    singles = [good(ground.region(ground.closure(1 << i))) for i in range(n)]
    if any(s is False for s in singles):
        return CoverResult(ExtNat.infinity(), None)

    pess = maximal_good_parts(ground, good, optimistic=False)
    unknown = any(v is None for v in _memo_values(good)) or whole is None
    upper_sol = exact_set_cover(full, pess)
    if not unknown:
        return _result(ground, good, upper_sol, pess)
    opt = maximal_good_parts(ground, good, optimistic=True)
    lower_sol = exact_set_cover(full, opt)
    lower = 0 if whole is None else len(lower_sol) - 1
    if upper_sol is not None and len(upper_sol) - 1 == lower:
        return _result(ground, good, upper_sol, pess)
    upper = None if upper_sol is None else len(upper_sol) - 1
    witness = None if upper_sol is None else _witness(ground, good, upper_sol)
    return CoverResult(ExtNat.inconclusive(lower, upper), witness, pess)


def _memo_values(good) -> list:
    memo = getattr(good, "memo", None)
    return [] if memo is None else list(memo.values())


def _witness(ground: GroundSet, good, parts: list[int]) -> CoverWitness:
    regions = [ground.region(p) for p in parts]
    fences = getattr(good, "fences", {})
    return CoverWitness(list(parts), regions, [fences.get(r) for r in regions])


def _result(ground: GroundSet, good, parts: list[int], maximal: list[int]) -> CoverResult:
    stats = {"goodness_tests": getattr(good, "tests_run", None), "maximal_parts": len(maximal)}
    return CoverResult(ExtNat.finite(len(parts) - 1), _witness(ground, good, parts), maximal, stats)


def validate_witness(ground: GroundSet, witness: CoverWitness, good: Callable[[int], bool | None], value: int) -> bool:
    """Coverage, goodness of each part, and ``len(parts) == value + 1``."""
    covered = 0
    for p in witness.parts:
        covered |= p
    if covered != ground.full:
        return False
    if any(ground.region(p) != r for p, r in zip(witness.parts, witness.regions)):
        return False
    if not all(good(r) for r in witness.regions):
        return False
    return len(witness.parts) == value + 1
