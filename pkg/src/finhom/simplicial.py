"""Order complexes, the McCord face poset, barycentric subdivision and contiguity.

Complexes are stored by their facets only (as vertex bitmasks); a vertex set
is a simplex iff it is contained in some facet.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from ._search import bidirectional_path
from .cover import Goodness, ground_set_for_facets, min_cover
from .distance import DistanceReport, distance_categorical, distance_open
from .errors import DomainMismatch, DuplicateElement, NotSimplicial, SizeGuardExceeded, UnknownElement
from .extnat import ExtNat
from .homotopy import BACKWARD, FORWARD, HomotopyFence, _dedupe
from .poset import FinPoset, OrderMap, iter_bits, maximal_chain_masks, popcount

CONTIGUITY_CAP = 500_000
SUBDIVISION_LIMIT = 64


class SComplex:
    def __init__(self, vertices: Sequence[Hashable], facets: Iterable[Iterable]):
        self.vertices: tuple = tuple(vertices)
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise DuplicateElement("duplicate vertex")
        masks = []
        for f in facets:
            m = 0
            for v in f:
                if v not in self._index:
                    raise UnknownElement(f"facet mentions unknown vertex {v!r}")
                m |= 1 << self._index[v]
            if m == 0:
                raise ValueError("empty facet")
            masks.append(m)
        # keep inclusion-maximal, first occurrence order
        kept: list[int] = []
        for m in masks:
            if m in kept or any(m & ~o == 0 and m != o for o in masks):
                continue
            kept.append(m)
        self.facet_masks: tuple[int, ...] = tuple(kept)
        covered = 0
        for m in kept:
            covered |= m
        if covered != (1 << len(self.vertices)) - 1:
            raise ValueError("every vertex must lie in some facet")
        self._simplex_memo: dict[int, bool] = {}

    @classmethod
    def from_masks(cls, vertices: Sequence, facet_masks: Sequence[int]) -> SComplex:
        K = cls.__new__(cls)
        K.vertices = tuple(vertices)
        K._index = {v: i for i, v in enumerate(K.vertices)}
        K.facet_masks = tuple(facet_masks)
        K._simplex_memo = {}
        return K

    def __eq__(self, other) -> bool:
        if not isinstance(other, SComplex):
            return NotImplemented
        return self.vertices == other.vertices and set(self.facet_masks) == set(other.facet_masks)

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.facet_masks)))

    def __repr__(self) -> str:
        return f"SComplex(vertices={list(self.vertices)!r}, facets={self.facets!r})"

    def index(self, v) -> int:
        try:
            return self._index[v]
        except (KeyError, TypeError):
            raise UnknownElement(f"{v!r} is not a vertex") from None

    @property
    def facets(self) -> list[tuple]:
        return [self.members(m) for m in self.facet_masks]

    def members(self, mask: int) -> tuple:
        return tuple(self.vertices[i] for i in iter_bits(mask))

    def is_simplex_mask(self, mask: int) -> bool:
        try:
            return self._simplex_memo[mask]
        except KeyError:
            ok = mask != 0 and any(mask & ~f == 0 for f in self.facet_masks)
            self._simplex_memo[mask] = ok
            return ok

    def is_simplex(self, vs: Iterable) -> bool:
        m = 0
        for v in vs:
            m |= 1 << self.index(v)
        return self.is_simplex_mask(m)

    @cached_property
    def simplex_masks(self) -> tuple[int, ...]:
        """All nonempty simplices, ordered by dimension then vertex indices."""
        found = set()
        for f in self.facet_masks:
            sub = f
            while sub:
                found.add(sub)
                sub = (sub - 1) & f
        return tuple(sorted(found, key=lambda m: (popcount(m), list(iter_bits(m)))))

    def subcomplex(self, facet_selection: int) -> SComplex:
        """Subcomplex generated by the facets selected by index mask."""
        chosen = [self.facet_masks[k] for k in iter_bits(facet_selection)]
        used = 0
        for m in chosen:
            used |= m
        idx = list(iter_bits(used))
        pos = {old: new for new, old in enumerate(idx)}
        remapped = [sum(1 << pos[i] for i in iter_bits(m)) for m in chosen]
        return SComplex.from_masks([self.vertices[i] for i in idx], remapped)

    def describe_region(self, facet_selection: int) -> tuple:
        return tuple(self.members(self.facet_masks[k]) for k in iter_bits(facet_selection))


class SMap:
    """Simplicial map given by vertex images (codomain vertex indices)."""

    __slots__ = ("domain", "codomain", "images")

    def __init__(self, domain: SComplex, codomain: SComplex, images: Sequence[int], *, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(images)
        if check:
            if len(self.images) != len(domain.vertices):
                raise ValueError("one image per vertex required")
            for f in domain.facet_masks:
                if not codomain.is_simplex_mask(self.image_mask(f)):
                    raise NotSimplicial(f"facet {domain.members(f)!r} is not sent to a simplex")

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= 1 << self.images[i]
        return out

    @property
    def vertex_map(self) -> dict:
        return {v: self.codomain.vertices[w] for v, w in zip(self.domain.vertices, self.images)}

    def __call__(self, v):
        return self.codomain.vertices[self.images[self.domain.index(v)]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SMap):
            return NotImplemented
        return self.images == other.images and self.domain == other.domain and self.codomain == other.codomain

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"SMap({self.vertex_map!r})"

    def restrict(self, facet_selection: int) -> SMap:
        sub = self.domain.subcomplex(facet_selection)
        return SMap(sub, self.codomain, [self.images[self.domain.index(v)] for v in sub.vertices], check=False)


def build_smap(K: SComplex, L: SComplex, vertex_map: dict) -> SMap:
    missing = [v for v in K.vertices if v not in vertex_map]
    if missing:
        raise UnknownElement(f"vertex map is not total; missing {missing[0]!r}")
    return SMap(K, L, [L.index(vertex_map[v]) for v in K.vertices])


def compose_smaps(psi: SMap, phi: SMap) -> SMap:
    if phi.codomain != psi.domain:
        raise DomainMismatch("simplicial maps are not composable")
    return SMap(phi.domain, psi.codomain, [psi.images[i] for i in phi.images], check=False)


def constant_smap(K: SComplex, L: SComplex, v) -> SMap:
    return SMap(K, L, [L.index(v)] * len(K.vertices), check=False)


# -- κ and χ -----------------------------------------------------------


def order_complex(P: FinPoset) -> SComplex:
    """Simplices are the nonempty chains; facets are the maximal chains."""
    return SComplex.from_masks(P.elements, maximal_chain_masks(P))


def order_complex_map(F: OrderMap) -> SMap:
    return SMap(order_complex(F.domain), order_complex(F.codomain), F.images, check=False)


def mccord(K: SComplex) -> FinPoset:
    """Face poset: simplices (vertex tuples in vertex order) ordered by inclusion."""
    simplices = K.simplex_masks
    pos = {m: i for i, m in enumerate(simplices)}
    down = []
    for m in simplices:
        d = 0
        sub = m
        while sub:
            d |= 1 << pos[sub]
            sub = (sub - 1) & m
        down.append(d)
    return FinPoset([K.members(m) for m in simplices], down, check=False)


def mccord_map(phi: SMap) -> OrderMap:
    src, dst = mccord(phi.domain), mccord(phi.codomain)
    pos = {m: i for i, m in enumerate(phi.codomain.simplex_masks)}
    return OrderMap(src, dst, [pos[phi.image_mask(m)] for m in phi.domain.simplex_masks], check=False)


def subdivide(P: FinPoset) -> FinPoset:
    """Barycentric subdivision: nonempty chains ordered by inclusion."""
    return mccord(order_complex(P))


def subdivide_map(F: OrderMap) -> OrderMap:
    return mccord_map(order_complex_map(F))


def iterated_subdivision(F: OrderMap, k: int) -> OrderMap:
    for _ in range(k):
        F = subdivide_map(F)
    return F


# -- contiguity ----------------------------------------------------------


def _same_ends(phi: SMap, psi: SMap) -> None:
    if phi.domain != psi.domain or phi.codomain != psi.codomain:
        raise DomainMismatch("simplicial maps must share domain and codomain")


def contiguous(phi: SMap, psi: SMap) -> bool:
    """``phi(σ) ∪ psi(σ)`` is a simplex for every simplex σ (facets suffice)."""
    _same_ends(phi, psi)
    L = phi.codomain
    return all(L.is_simplex_mask(phi.image_mask(f) | psi.image_mask(f)) for f in phi.domain.facet_masks)


def _move_neighbors(K: SComplex, L: SComplex):
    # Changing one vertex at a time generates the same classes as arbitrary
    # contiguity steps: between contiguous φ and ψ, switching vertices one by
    # one stays inside φ(σ) ∪ ψ(σ) on every facet.
    nv, nw = len(K.vertices), len(L.vertices)
    star = [[f for f in K.facet_masks if f >> v & 1] for v in range(nv)]

    def neighbors(f: tuple):
        for v in range(nv):
            imgs = []
            for s in star[v]:
                m = 0
                for i in iter_bits(s):
                    m |= 1 << f[i]
                imgs.append(m)
            for w in range(nw):
                if w == f[v]:
                    continue
                bit = 1 << w
                if all(L.is_simplex_mask(m | bit) for m in imgs):
                    yield f[:v] + (w,) + f[v + 1:]

    return neighbors


def same_contiguity_class(phi: SMap, psi: SMap, *, cap: int = CONTIGUITY_CAP) -> list[SMap] | None:
    """A chain of pairwise contiguous maps from phi to psi, or None.  Raises SearchCapExceeded."""
    _same_ends(phi, psi)
    K, L = phi.domain, phi.codomain
    path = bidirectional_path(phi.images, psi.images, _move_neighbors(K, L), cap)
    if path is None:
        return None
    return [SMap(K, L, p, check=False) for p in path]


def mccord_fence(chain: Sequence[SMap]) -> HomotopyFence:
    """Fence between the McCord images of the ends of a contiguity chain.

    For contiguous φ, ψ the map ``σ -> φ(σ) ∪ ψ(σ)`` is order-preserving and
    lies above both ``χφ`` and ``χψ``, so each step becomes ``χφ <= θ >= χψ``.
    """
    steps = [mccord_map(chain[0])]
    dirs: list[str] = []
    for phi, psi in zip(chain, chain[1:]):
        src, dst = mccord(phi.domain), mccord(phi.codomain)
        pos = {m: i for i, m in enumerate(phi.codomain.simplex_masks)}
        theta = OrderMap(
            src, dst, [pos[phi.image_mask(m) | psi.image_mask(m)] for m in phi.domain.simplex_masks], check=False
        )
        steps += [theta, mccord_map(psi)]
        dirs += [FORWARD, BACKWARD]
    return _dedupe(HomotopyFence(steps, dirs))


def iter_smaps(K: SComplex, L: SComplex):
    """Every simplicial map ``K -> L`` as an image tuple."""
    n = len(K.vertices)
    images = [0] * n
    facets = K.facet_masks

    def ok_upto(k: int) -> bool:
        for f in facets:
            m = 0
            for i in iter_bits(f):
                if i <= k:
                    m |= 1 << images[i]
            if m and not L.is_simplex_mask(m):
                return False
        return True

    def rec(k: int):
        if k == n:
            yield tuple(images)
            return
        for w in range(len(L.vertices)):
            images[k] = w
            if ok_upto(k):
                yield from rec(k + 1)

    yield from rec(0)


def _image_or(images: tuple, mask: int) -> int:
    out = 0
    for v in iter_bits(mask):
        out |= 1 << images[v]
    return out


def contiguity_classes_bruteforce(K: SComplex, L: SComplex) -> dict[tuple, int]:
    """Union-find over all simplicial maps with an edge for every contiguous pair."""
    maps = list(iter_smaps(K, L))
    parent = list(range(len(maps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, f in enumerate(maps):
        for j in range(i + 1, len(maps)):
            g = maps[j]
            if all(L.is_simplex_mask(_image_or(f, s) | _image_or(g, s)) for s in K.facet_masks):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    return {f: find(i) for i, f in enumerate(maps)}


def contiguity_distance(phi: SMap, psi: SMap, *, cap: int = CONTIGUITY_CAP) -> DistanceReport:
    """sD: least n with a cover by n + 1 facet-generated subcomplexes on which the maps share a class."""
    _same_ends(phi, psi)
    K = phi.domain

    def test(selection: int):
        return same_contiguity_class(phi.restrict(selection), psi.restrict(selection), cap=cap)

    ground = ground_set_for_facets(len(K.facet_masks))
    result = min_cover(ground, Goodness(test))
    regions = [] if result.witness is None else list(result.witness.regions)
    return DistanceReport("sD", result.value, regions, domain=K, cover=result)


def scat(phi: SMap, *, cap: int = CONTIGUITY_CAP) -> DistanceReport:
    """Simplicial LS-category of a map: sD against the constant map onto the first codomain vertex."""
    c = constant_smap(phi.domain, phi.codomain, phi.codomain.vertices[0])
    rep = contiguity_distance(phi, c, cap=cap)
    rep.kind = "scat"
    return rep


# -- stabilization -------------------------------------------------------


@dataclass
class StabilizationLevel:
    k: int
    size: int
    D: ExtNat
    cD: ExtNat


@dataclass
class StabilizationResult:
    levels: list[StabilizationLevel] = field(default_factory=list)
    interleaving_ok: bool = True
    violations: list[str] = field(default_factory=list)

    @property
    def stabilized_at(self) -> int | None:
        for lv in self.levels:
            if lv.D == lv.cD and lv.D.is_finite:
                return lv.k
        return None

    def to_json(self) -> dict:
        return {
            "levels": [
                {"k": lv.k, "size": lv.size, "D": lv.D.to_json(), "cD": lv.cD.to_json()} for lv in self.levels
            ],
            "stabilized_at": self.stabilized_at,
            "interleaving_ok": self.interleaving_ok,
            "violations": list(self.violations),
        }


def _le(a: ExtNat, b: ExtNat) -> bool | None:
    if a.is_inconclusive or b.is_inconclusive:
        return None
    return a.as_number() <= b.as_number()


def stabilize(F: OrderMap, G: OrderMap, k_max: int, *, size_limit: int = SUBDIVISION_LIMIT, cap: int = CONTIGUITY_CAP) -> StabilizationResult:
    """D and cD of ``sd^k F, sd^k G`` for k = 0..k_max, checking
    ``cD(sd^{k+1}) <= D(sd^{k+1}) <= cD(sd^k)`` at every level.

    Levels whose domain exceeds ``size_limit`` elements are refused.
    """
    if F.domain != G.domain or F.codomain != G.codomain:
        raise DomainMismatch("maps must share domain and codomain")
    out = StabilizationResult()
    f, g = F, G
    for k in range(k_max + 1):
        if k > 0:
            f, g = subdivide_map(f), subdivide_map(g)
        if len(f.domain) > size_limit:
            raise SizeGuardExceeded(f"sd^{k} of the domain has {len(f.domain)} elements, above the limit {size_limit}")
        d = distance_open(f, g, cap=cap).value
        cd = distance_categorical(f, g, cap=cap).value
        out.levels.append(StabilizationLevel(k, len(f.domain), d, cd))
        if _le(cd, d) is False:
            out.interleaving_ok = False
            out.violations.append(f"level {k}: cD={cd} > D={d}")
        if k > 0 and _le(d, out.levels[k - 1].cD) is False:
            out.interleaving_ok = False
            out.violations.append(f"level {k}: D={d} > cD at level {k - 1}")
    return out
