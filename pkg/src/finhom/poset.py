"""Finite posets, read both as finite T0-spaces and as small categories.

Elements are arbitrary hashable identifiers; internally everything is indexed
by position in ``FinPoset.elements`` and relations are stored as bitmasks:
``down[i]`` has bit ``j`` set iff ``elements[j] <= elements[i]``.  The element
order fixes every iteration order in the package.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import CycleError, DomainMismatch, DuplicateElement, NotMonotone, UnknownElement


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FinPoset:
    """Immutable finite partial order.

    Build one with :func:`build_poset` from generating relations, or pass the
    down-set bitmasks directly (validated unless ``check=False``).
    """

    __slots__ = ("elements", "down", "_index", "__dict__")

    def __init__(self, elements: Sequence[Hashable], down: Sequence[int], *, check: bool = True):
        self.elements: tuple = tuple(elements)
        self.down: tuple[int, ...] = tuple(down)
        self._index = {x: i for i, x in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            seen = set()
            dup = next(x for x in self.elements if x in seen or seen.add(x))
            raise DuplicateElement(f"duplicate element {dup!r}")
        if len(self.down) != len(self.elements):
            raise ValueError("down masks must have one entry per element")
        if check:
            self._validate()

    def _validate(self) -> None:
        n = len(self.elements)
        full = (1 << n) - 1
        for i, d in enumerate(self.down):
            if d & ~full:
                raise ValueError("down mask refers to a non-element")
            if not d >> i & 1:
                raise ValueError(f"relation not reflexive at {self.elements[i]!r}")
            for j in iter_bits(d):
                if j != i and self.down[j] >> i & 1:
                    raise CycleError(
                        f"{self.elements[i]!r} and {self.elements[j]!r} are mutually related"
                    )
                if self.down[j] & ~d:
                    raise ValueError("relation not transitive")

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        try:
            return x in self._index
        except TypeError:
            return False

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinPoset):
            return NotImplemented
        return self.elements == other.elements and self.down == other.down

    def __hash__(self) -> int:
        return hash((self.elements, self.down))

    def __repr__(self) -> str:
        return f"FinPoset({list(self.elements)!r}, hasse={self.hasse!r})"

    def index(self, x) -> int:
        try:
            return self._index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"{x!r} is not an element") from None

    def le(self, x, y) -> bool:
        return bool(self.down[self.index(y)] >> self.index(x) & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.le(x, y)

    def comparable(self, x, y) -> bool:
        return self.le(x, y) or self.le(y, x)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def up(self) -> tuple[int, ...]:
        """``up[i]`` has bit ``j`` set iff ``elements[i] <= elements[j]``."""
        up = [0] * len(self.elements)
        for i, d in enumerate(self.down):
            for j in iter_bits(d):
                up[j] |= 1 << i
        return tuple(up)

    @cached_property
    def leq(self) -> tuple[tuple[bool, ...], ...]:
        n = len(self.elements)
        return tuple(tuple(bool(self.down[j] >> i & 1) for j in range(n)) for i in range(n))

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        """Indices covered by each element (Hasse diagram, downward)."""
        out = []
        for i, d in enumerate(self.down):
            strict = d & ~(1 << i)
            covers = strict
            for j in iter_bits(strict):
                covers &= ~(self.down[j] & ~(1 << j))
            out.append(tuple(iter_bits(covers)))
        return tuple(out)

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.elements]
        for i, lows in enumerate(self.lower_covers):
            for j in lows:
                out[j].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def hasse(self) -> tuple[tuple, ...]:
        """Cover pairs ``(x, y)`` with x covered by y."""
        return tuple(
            (self.elements[j], self.elements[i])
            for i, lows in enumerate(self.lower_covers)
            for j in lows
        )

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Indices sorted so that every element comes after everything below it."""
        return tuple(sorted(range(len(self.elements)), key=lambda i: (popcount(self.down[i]), i)))

    def mask_of(self, members: Iterable) -> int:
        m = 0
        for x in members:
            m |= 1 << self.index(x)
        return m

    def members_of(self, mask: int) -> tuple:
        return tuple(self.elements[i] for i in iter_bits(mask))

    def induced(self, mask: int) -> FinPoset:
        """Full subposet on the elements selected by ``mask`` (memoized per poset)."""
        memo = self.__dict__.setdefault("_induced_memo", {})
        hit = memo.get(mask)
        if hit is None:
            hit = memo[mask] = self._induced(mask)
        return hit

    def _induced(self, mask: int) -> FinPoset:
        idx = list(iter_bits(mask))
        pos = {old: new for new, old in enumerate(idx)}
        down = []
        for old in idx:
            d = 0
            for j in iter_bits(self.down[old] & mask):
                d |= 1 << pos[j]
            down.append(d)
        return FinPoset([self.elements[i] for i in idx], down, check=False)

    def subposet(self, members: Iterable) -> FinPoset:
        return self.induced(self.mask_of(members))


@dataclass(frozen=True)
class SubPoset:
    """Full subposet of ``parent`` spanned by ``members``."""

    parent: FinPoset
    members: frozenset

    def __post_init__(self):
        for x in self.members:
            self.parent.index(x)

    @property
    def mask(self) -> int:
        return self.parent.mask_of(self.members)

    @property
    def poset(self) -> FinPoset:
        return self.parent.induced(self.mask)

    def sorted_members(self) -> tuple:
        return self.parent.members_of(self.mask)

    def __contains__(self, x) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)


def build_poset(elements: Iterable[Hashable], relations: Iterable[tuple] = ()) -> FinPoset:
    """Reflexive-transitive closure of generating pairs ``(x, y)`` meaning x <= y."""
    elements = list(elements)
    index: dict = {}
    for i, x in enumerate(elements):
        if x in index:
            raise DuplicateElement(f"duplicate element {x!r}")
        index[x] = i
    n = len(elements)
    down = [1 << i for i in range(n)]
    for pair in relations:
        x, y = pair
        if x not in index:
            raise UnknownElement(f"relation mentions unknown element {x!r}")
        if y not in index:
            raise UnknownElement(f"relation mentions unknown element {y!r}")
        down[index[y]] |= 1 << index[x]
    # Warshall on bitmasks
    for k in range(n):
        bit = 1 << k
        dk = down[k]
        for i in range(n):
            if down[i] & bit:
                down[i] |= dk
    for i in range(n):
        for j in iter_bits(down[i] & ~(1 << i)):
            if down[j] >> i & 1:
                raise CycleError(f"cycle through {elements[i]!r} and {elements[j]!r}")
    return FinPoset(elements, down, check=False)


def minimal_open(P: FinPoset, y) -> SubPoset:
    """The down-set of ``y``: the smallest open set containing it."""
    return SubPoset(P, frozenset(P.members_of(P.down[P.index(y)])))


def up_set(P: FinPoset, x) -> SubPoset:
    return SubPoset(P, frozenset(P.members_of(P.up[P.index(x)])))


def opposite(P: FinPoset) -> FinPoset:
    return FinPoset(P.elements, P.up, check=False)


def is_down_set(P: FinPoset, mask: int) -> bool:
    return all(P.down[i] & ~mask == 0 for i in iter_bits(mask))


def is_connected(P: FinPoset) -> bool:
    hit = P.__dict__.get("_connected")
    if hit is None:
        hit = P.__dict__["_connected"] = _connected(P)
    return hit


def _connected(P: FinPoset) -> bool:
    if len(P) == 0:
        return False
    seen = 1
    stack = [0]
    while stack:
        i = stack.pop()
        fresh = (P.down[i] | P.up[i]) & ~seen
        seen |= fresh
        stack.extend(iter_bits(fresh))
    return seen == P.full_mask


def components(P: FinPoset) -> list[int]:
    """Connected components as element masks, ordered by lowest index."""
    left = P.full_mask
    out = []
    while left:
        start = (left & -left).bit_length() - 1
        comp = 1 << start
        stack = [start]
        while stack:
            i = stack.pop()
            fresh = (P.down[i] | P.up[i]) & ~comp
            comp |= fresh
            stack.extend(iter_bits(fresh))
        out.append(comp)
        left &= ~comp
    return out


def maximal_elements(P: FinPoset) -> tuple:
    return tuple(x for i, x in enumerate(P.elements) if not P.upper_covers[i])


def minimal_elements(P: FinPoset) -> tuple:
    return tuple(x for i, x in enumerate(P.elements) if not P.lower_covers[i])


def maximal_chain_masks(P: FinPoset) -> list[int]:
    """Maximal chains as element masks: Hasse paths from a minimal to a maximal element."""
    out = []

    def walk(i: int, acc: int) -> None:
        ups = P.upper_covers[i]
        if not ups:
            out.append(acc)
            return
        for j in ups:
            walk(j, acc | 1 << j)

    for i in range(len(P)):
        if not P.lower_covers[i]:
            walk(i, 1 << i)
    return out


def maximal_chains(P: FinPoset) -> list[tuple]:
    """All inclusion-maximal chains, each listed bottom to top."""
    return [_chain_tuple(P, m) for m in maximal_chain_masks(P)]


def _chain_tuple(P: FinPoset, mask: int) -> tuple:
    return tuple(P.elements[i] for i in sorted(iter_bits(mask), key=lambda i: popcount(P.down[i])))


def chain_masks(P: FinPoset) -> list[int]:
    """All nonempty chains as masks (totally ordered subsets)."""
    out = []

    def extend(top: int, acc: int) -> None:
        out.append(acc)
        for j in iter_bits(P.up[top] & ~(1 << top)):
            extend(j, acc | 1 << j)

    for i in range(len(P)):
        extend(i, 1 << i)
    return out


def is_chain(P: FinPoset, mask: int) -> bool:
    return all(((P.down[i] | P.up[i]) & mask) == mask for i in iter_bits(mask))


def disjoint_union(P: FinPoset, Q: FinPoset) -> FinPoset:
    elements = [(0, x) for x in P.elements] + [(1, y) for y in Q.elements]
    shift = len(P)
    down = list(P.down) + [d << shift for d in Q.down]
    return FinPoset(elements, down, check=False)


class OrderMap:
    """Order-preserving map; ``images[i]`` is the codomain index of ``domain.elements[i]``."""

    __slots__ = ("domain", "codomain", "images")

    def __init__(self, domain: FinPoset, codomain: FinPoset, images: Sequence[int], *, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.images: tuple[int, ...] = tuple(images)
        if check:
            if len(self.images) != len(domain):
                raise ValueError("images must have one entry per domain element")
            pair = first_violation(domain, codomain, self.images)
            if pair is not None:
                x, y = pair
                raise NotMonotone(
                    f"{x!r} <= {y!r} but {self(x)!r} is not <= {self(y)!r}", pair=pair
                )

    def __call__(self, x):
        return self.codomain.elements[self.images[self.domain.index(x)]]

    @property
    def assignment(self) -> dict:
        return {x: self.codomain.elements[v] for x, v in zip(self.domain.elements, self.images)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrderMap):
            return NotImplemented
        return (
            self.images == other.images
            and self.domain == other.domain
            and self.codomain == other.codomain
        )

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"OrderMap({self.assignment!r})"

    def restrict(self, mask: int) -> OrderMap:
        """Restriction to the full subposet selected by ``mask``."""
        sub = self.domain.induced(mask)
        return OrderMap(sub, self.codomain, [self.images[i] for i in iter_bits(mask)], check=False)

    def restrict_to(self, members: Iterable) -> OrderMap:
        return self.restrict(self.domain.mask_of(members))

    def le(self, other: OrderMap) -> bool:
        """Pointwise comparison ``self(x) <= other(x)`` for every x."""
        cd = self.codomain.down
        return all(cd[b] >> a & 1 for a, b in zip(self.images, other.images))


def first_violation(P: FinPoset, Q: FinPoset, images: Sequence[int]) -> tuple | None:
    for i, lows in enumerate(P.lower_covers):
        di = Q.down[images[i]]
        for j in lows:
            if not di >> images[j] & 1:
                return (P.elements[j], P.elements[i])
    return None


def build_order_map(P: FinPoset, Q: FinPoset, assignment: Mapping) -> OrderMap:
    missing = [x for x in P.elements if x not in assignment]
    if missing:
        raise UnknownElement(f"assignment is not total; missing {missing[0]!r}")
    extra = [x for x in assignment if x not in P]
    if extra:
        raise UnknownElement(f"assignment mentions unknown element {extra[0]!r}")
    return OrderMap(P, Q, [Q.index(assignment[x]) for x in P.elements])


def identity_map(P: FinPoset) -> OrderMap:
    return OrderMap(P, P, range(len(P)), check=False)


def constant_map(P: FinPoset, Q: FinPoset, value) -> OrderMap:
    return OrderMap(P, Q, [Q.index(value)] * len(P), check=False)


def compose(G: OrderMap, F: OrderMap) -> OrderMap:
    """``G ∘ F``: apply F first."""
    if F.codomain != G.domain:
        raise DomainMismatch("codomain of F differs from domain of G")
    return OrderMap(F.domain, G.codomain, [G.images[i] for i in F.images], check=False)


def opposite_map(F: OrderMap) -> OrderMap:
    return OrderMap(opposite(F.domain), opposite(F.codomain), F.images, check=False)


# -- products ----------------------------------------------------------


def product(P: FinPoset, Q: FinPoset) -> FinPoset:
    """Componentwise order on pairs; ``(p, q)`` sits at index ``i*len(Q)+j``."""
    m = len(Q)
    down = []
    for i in range(len(P)):
        for j in range(m):
            d = 0
            for a in iter_bits(P.down[i]):
                d |= Q.down[j] << (a * m)
            down.append(d)
    elements = [(p, q) for p in P.elements for q in Q.elements]
    return FinPoset(elements, down, check=False)


def projections(P: FinPoset, Q: FinPoset, PQ: FinPoset | None = None) -> tuple[OrderMap, OrderMap]:
    PQ = product(P, Q) if PQ is None else PQ
    m = len(Q)
    p1 = OrderMap(PQ, P, [k // m for k in range(len(PQ))], check=False)
    p2 = OrderMap(PQ, Q, [k % m for k in range(len(PQ))], check=False)
    return p1, p2


def diagonal(P: FinPoset, PP: FinPoset | None = None) -> OrderMap:
    PP = product(P, P) if PP is None else PP
    n = len(P)
    return OrderMap(P, PP, [i * n + i for i in range(n)], check=False)


def inclusions(P: FinPoset, base, PP: FinPoset | None = None) -> tuple[OrderMap, OrderMap]:
    """``i1(c) = (c, base)`` and ``i2(c) = (base, c)`` into ``P × P``."""
    PP = product(P, P) if PP is None else PP
    n = len(P)
    b = P.index(base)
    i1 = OrderMap(P, PP, [i * n + b for i in range(n)], check=False)
    i2 = OrderMap(P, PP, [b * n + i for i in range(n)], check=False)
    return i1, i2


def product_map(F: OrderMap, G: OrderMap) -> OrderMap:
    """``F × G`` between the product posets."""
    dom = product(F.domain, G.domain)
    cod = product(F.codomain, G.codomain)
    m = len(G.codomain)
    images = [a * m + b for a in F.images for b in G.images]
    return OrderMap(dom, cod, images, check=False)


# -- enumeration -------------------------------------------------------


def iter_order_maps(P: FinPoset, Q: FinPoset) -> Iterator[tuple[int, ...]]:
    """Every order-preserving map ``P -> Q`` as an image tuple (backtracking along a linear extension)."""
    order = P.linear_extension
    n = len(P)
    images = [0] * n
    full = Q.full_mask
    lows = P.lower_covers

    def rec(k: int):
        if k == n:
            yield tuple(images)
            return
        x = order[k]
        allowed = full
        for y in lows[x]:
            allowed &= Q.up[images[y]]
        for v in iter_bits(allowed):
            images[x] = v
            yield from rec(k + 1)

    yield from rec(0)


def count_maximal_chains_product(P: FinPoset, Q: FinPoset) -> int:
    """Maximal chains of ``P × Q`` counted by shuffling pairs of maximal chains."""
    from math import comb

    total = 0
    for c in maximal_chain_masks(P):
        for d in maximal_chain_masks(Q):
            a, b = popcount(c) - 1, popcount(d) - 1
            total += comb(a + b, a)
    return total


def all_subsets(mask: int) -> Iterator[int]:
    """Nonempty submasks of ``mask`` in increasing numeric order."""
    bits = list(iter_bits(mask))
    for r in range(1, len(bits) + 1):
        for combo in combinations(bits, r):
            m = 0
            for b in combo:
                m |= 1 << b
            yield m
