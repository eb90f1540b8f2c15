"""Finite categories given by explicit composition tables, and functors between them.

Arrows are identified by hashable names.  ``compose[(g, f)]`` is ``g ∘ f``
(apply ``f`` first).  Identities are synthesized and recorded in
``FinCat.identity``; when a category is read from a file they are named
``id_<object>``.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian

from .errors import (
    BadEndpoints,
    DomainMismatch,
    DuplicateElement,
    MissingComposite,
    NotAcyclic,
    NotAFunctor,
    NotAPosetCategory,
    NotAssociative,
    UnknownElement,
    UnsupportedCategoryShape,
)
from .poset import FinPoset, OrderMap, iter_bits, maximal_chain_masks


class FinCat:
    """A finite category with a fully materialized composition table."""

    def __init__(
        self,
        objects: Sequence[Hashable],
        arrows: Mapping[Hashable, tuple[Hashable, Hashable]],
        identity: Mapping[Hashable, Hashable],
        compose: Mapping[tuple[Hashable, Hashable], Hashable],
        *,
        check: bool = True,
    ):
        self.objects: tuple = tuple(objects)
        self.src: dict = {a: s for a, (s, _) in arrows.items()}
        self.dst: dict = {a: t for a, (_, t) in arrows.items()}
        self.arrows: tuple = tuple(arrows)
        self.identity: dict = dict(identity)
        self.compose_table: dict = dict(compose)
        if len(set(self.objects)) != len(self.objects):
            raise DuplicateElement("duplicate object")
        if check:
            self._validate()

    def _validate(self) -> None:
        objs = set(self.objects)
        for a in self.arrows:
            if self.src[a] not in objs or self.dst[a] not in objs:
                raise BadEndpoints(f"arrow {a!r} has an unknown endpoint")
        for x in self.objects:
            e = self.identity.get(x)
            if e is None or self.src.get(e) != x or self.dst.get(e) != x:
                raise BadEndpoints(f"object {x!r} lacks an identity")
        for f in self.arrows:
            for g in self.out_arrows(self.dst[f]):
                h = self.compose_table.get((g, f))
                if h is None:
                    raise MissingComposite(f"no composite recorded for {g!r} ∘ {f!r}")
                if self.src.get(h) != self.src[f] or self.dst.get(h) != self.dst[g]:
                    raise BadEndpoints(f"{g!r} ∘ {f!r} = {h!r} has the wrong endpoints")
        for key in self.compose_table:
            g, f = key
            if g not in self.src or f not in self.src or self.dst[f] != self.src[g]:
                raise BadEndpoints(f"composite entry for non-composable pair {key!r}")
        for x in self.objects:
            e = self.identity[x]
            for f in self.out_arrows(x):
                if self.compose_table[(f, e)] != f:
                    raise BadEndpoints(f"identity of {x!r} is not right-neutral for {f!r}")
            for f in self.in_arrows(x):
                if self.compose_table[(e, f)] != f:
                    raise BadEndpoints(f"identity of {x!r} is not left-neutral for {f!r}")
        c = self.compose_table
        for f in self.arrows:
            for g in self.out_arrows(self.dst[f]):
                gf = c[(g, f)]
                for h in self.out_arrows(self.dst[g]):
                    if c[(h, gf)] != c[(c[(h, g)], f)]:
                        raise NotAssociative(
                            f"({h!r} ∘ {g!r}) ∘ {f!r} differs from {h!r} ∘ ({g!r} ∘ {f!r})",
                            triple=(h, g, f),
                        )

    def __repr__(self) -> str:
        return f"FinCat(objects={list(self.objects)!r}, arrows={len(self.arrows)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.arrows == other.arrows
            and self.src == other.src
            and self.dst == other.dst
            and self.identity == other.identity
            and self.compose_table == other.compose_table
        )

    def __hash__(self) -> int:
        return hash((self.objects, self.arrows))

    @cached_property
    def _out(self) -> dict:
        out: dict = {x: [] for x in self.objects}
        for a in self.arrows:
            out[self.src[a]].append(a)
        return out

    @cached_property
    def _in(self) -> dict:
        inn: dict = {x: [] for x in self.objects}
        for a in self.arrows:
            inn[self.dst[a]].append(a)
        return inn

    @cached_property
    def _hom(self) -> dict:
        hom: dict = {}
        for a in self.arrows:
            hom.setdefault((self.src[a], self.dst[a]), []).append(a)
        return hom

    def out_arrows(self, x) -> list:
        return self._out[x]

    def in_arrows(self, x) -> list:
        return self._in[x]

    def hom(self, x, y) -> list:
        return self._hom.get((x, y), [])

    def compose(self, g, f):
        """``g ∘ f``."""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise BadEndpoints(f"{g!r} and {f!r} are not composable") from None

    def is_identity(self, a) -> bool:
        return self.identity[self.src[a]] == a

    @cached_property
    def non_identity_arrows(self) -> tuple:
        return tuple(a for a in self.arrows if not self.is_identity(a))

    def full_subcategory(self, objects: Iterable) -> FinCat:
        keep = set(objects)
        for x in keep:
            if x not in self._out:
                raise UnknownElement(f"{x!r} is not an object")
        objs = [x for x in self.objects if x in keep]
        arrows = {a: (self.src[a], self.dst[a]) for a in self.arrows if self.src[a] in keep and self.dst[a] in keep}
        comp = {k: v for k, v in self.compose_table.items() if k[0] in arrows and k[1] in arrows}
        return FinCat(objs, arrows, {x: self.identity[x] for x in objs}, comp, check=False)

    def is_group_like(self) -> bool:
        """One object and every arrow invertible."""
        if len(self.objects) != 1:
            return False
        (x,) = self.objects
        e = self.identity[x]
        return all(any(self.compose_table[(g, f)] == e for g in self.arrows) for f in self.arrows)


def build_category(
    objects: Sequence[Hashable],
    arrows: Iterable[tuple[Hashable, Hashable, Hashable]] = (),
    compose: Iterable[tuple[Hashable, Hashable, Hashable]] = (),
    *,
    identity_name=lambda x: f"id_{x}",
) -> FinCat:
    """Validate a category from non-identity arrows ``(name, src, dst)`` and entries ``(g, f, g∘f)``.

    Composites involving identities are synthesized.  Raises MissingComposite,
    NotAssociative or BadEndpoints on malformed tables.
    """
    objects = list(objects)
    table: dict = {}
    identity = {x: identity_name(x) for x in objects}
    for x, e in identity.items():
        table[e] = (x, x)
    for name, s, t in arrows:
        if name in table:
            if name in identity.values():
                raise BadEndpoints(f"arrow name {name!r} is reserved for an identity")
            raise DuplicateElement(f"duplicate arrow {name!r}")
        if s not in identity or t not in identity:
            raise BadEndpoints(f"arrow {name!r} has an unknown endpoint")
        table[name] = (s, t)
    comp: dict = {}
    for a, (s, t) in table.items():
        comp[(identity[t], a)] = a
        comp[(a, identity[s])] = a
    for g, f, h in compose:
        for a in (g, f, h):
            if a not in table:
                raise BadEndpoints(f"composition entry mentions unknown arrow {a!r}")
        if (g, f) in comp and comp[(g, f)] != h:
            raise BadEndpoints(f"conflicting composite for {g!r} ∘ {f!r}")
        comp[(g, f)] = h
    return FinCat(objects, table, identity, comp)


def group_category(elements: Sequence[Hashable], multiply, *, obj: Hashable = "*") -> FinCat:
    """One-object category of a finite group; ``elements[0]`` must be the neutral element."""
    e = elements[0]
    arrows = {g: (obj, obj) for g in elements}
    comp = {(g, f): multiply(g, f) for g in elements for f in elements}
    return FinCat([obj], arrows, {obj: e}, comp)


def cyclic_group_category(n: int) -> FinCat:
    return group_category(list(range(n)), lambda a, b: (a + b) % n)


# -- posets as categories ---------------------------------------------


def _pair_arrow(x, y):
    return ("<=", x, y)


def from_poset(P: FinPoset) -> FinCat:
    """One arrow ``x -> y`` for each ``x <= y``; arrows are named ``("<=", x, y)``."""
    arrows = {}
    identity = {}
    for i, y in enumerate(P.elements):
        for j in iter_bits(P.down[i]):
            x = P.elements[j]
            arrows[_pair_arrow(x, y)] = (x, y)
    for x in P.elements:
        identity[x] = _pair_arrow(x, x)
    comp = {}
    for (_, x, y) in arrows:
        i = P.index(y)
        for k in iter_bits(P.up[i]):
            z = P.elements[k]
            comp[(_pair_arrow(y, z), _pair_arrow(x, y))] = _pair_arrow(x, z)
    return FinCat(P.elements, arrows, identity, comp, check=False)


def to_poset(C: FinCat) -> FinPoset:
    for x in C.objects:
        for a in C.hom(x, x):
            if a != C.identity[x]:
                raise NotAPosetCategory(f"non-identity endomorphism {a!r} on {x!r}")
    index = {x: i for i, x in enumerate(C.objects)}
    down = [1 << i for i in range(len(C.objects))]
    for (x, y), arrs in C._hom.items():
        if len(arrs) > 1:
            raise NotAPosetCategory(f"{len(arrs)} parallel arrows from {x!r} to {y!r}")
        if x != y:
            if C.hom(y, x):
                raise NotAPosetCategory(f"{x!r} and {y!r} are isomorphic but distinct")
            down[index[y]] |= 1 << index[x]
    return FinPoset(C.objects, down)


def is_posetal(C: FinCat) -> bool:
    try:
        to_poset(C)
    except NotAPosetCategory:
        return False
    return True


def is_acyclic(C: FinCat) -> bool:
    for x in C.objects:
        if len(C.hom(x, x)) != 1:
            return False
    for (x, y) in C._hom:
        if x != y and C.hom(y, x):
            return False
    return True


def reachability_poset(C: FinCat) -> FinPoset:
    """``x <= y`` iff some arrow ``x -> y`` exists; a partial order when C is acyclic."""
    if not is_acyclic(C):
        raise NotAcyclic("category has a non-identity endomorphism or an isomorphism cycle")
    index = {x: i for i, x in enumerate(C.objects)}
    down = [1 << i for i in range(len(C.objects))]
    for (x, y) in C._hom:
        down[index[y]] |= 1 << index[x]
    return FinPoset(C.objects, down, check=False)


@dataclass(frozen=True)
class ComposableChain:
    """Composable non-identity arrows ``f_1, ..., f_n`` (``f_1`` applied first)."""

    arrows: tuple

    def objects(self, C: FinCat) -> tuple:
        if not self.arrows:
            return ()
        return (C.src[self.arrows[0]],) + tuple(C.dst[a] for a in self.arrows)

    def is_valid(self, C: FinCat) -> bool:
        if any(C.is_identity(a) for a in self.arrows):
            return False
        return all(C.dst[f] == C.src[g] for f, g in zip(self.arrows, self.arrows[1:]))


def maximal_composable_chains(C: FinCat) -> list[ComposableChain]:
    """Composable chains whose object sequence cannot be extended or refined.

    For an acyclic category the object sets of composable chains are exactly
    the chains of the reachability order, so maximality is decided there.
    A category with a single object and no other arrows has one empty chain.
    """
    R = reachability_poset(C)
    out = []
    for mask in maximal_chain_masks(R):
        objs = sorted(iter_bits(mask), key=lambda i: bin(R.down[i]).count("1"))
        names = [C.objects[i] for i in objs]
        homs = [C.hom(a, b) for a, b in zip(names, names[1:])]
        for arrows in cartesian(*homs):
            out.append(ComposableChain(tuple(arrows)))
    return out


def chain_object_masks(C: FinCat) -> list[int]:
    """Object masks (by ``C.objects`` index) of the maximal composable chains."""
    return maximal_chain_masks(reachability_poset(C))


def is_geometric_cover(C: FinCat, parts: Sequence[Iterable]) -> bool:
    """Every maximal composable chain lies in one of the full subcategories ``parts``."""
    index = {x: i for i, x in enumerate(C.objects)}
    masks = []
    for part in parts:
        m = 0
        for x in part:
            if x not in index:
                raise UnknownElement(f"{x!r} is not an object")
            m |= 1 << index[x]
        masks.append(m)
    if is_acyclic(C):
        return all(any(c & ~m == 0 for m in masks) for c in chain_object_masks(C))
    if C.is_group_like():
        return any(m == 1 for m in masks)
    raise UnsupportedCategoryShape("geometric covers are decided for acyclic or one-object group categories")


def opposite_category(C: FinCat) -> FinCat:
    arrows = {a: (C.dst[a], C.src[a]) for a in C.arrows}
    comp = {(f, g): h for (g, f), h in C.compose_table.items()}
    return FinCat(C.objects, arrows, C.identity, comp, check=False)


def product_category(C: FinCat, D: FinCat) -> FinCat:
    objects = [(x, y) for x in C.objects for y in D.objects]
    arrows = {(f, g): ((C.src[f], D.src[g]), (C.dst[f], D.dst[g])) for f in C.arrows for g in D.arrows}
    identity = {(x, y): (C.identity[x], D.identity[y]) for x, y in objects}
    comp = {}
    for (g1, f1), h1 in C.compose_table.items():
        for (g2, f2), h2 in D.compose_table.items():
            comp[((g1, g2), (f1, f2))] = (h1, h2)
    return FinCat(objects, arrows, identity, comp, check=False)


# -- functors ----------------------------------------------------------


class Functor:
    def __init__(self, domain: FinCat, codomain: FinCat, object_map: Mapping, arrow_map: Mapping, *, check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.object_map = dict(object_map)
        self.arrow_map = dict(arrow_map)
        if check:
            self._validate()

    def _validate(self) -> None:
        C, D = self.domain, self.codomain
        for x in C.objects:
            if self.object_map.get(x) not in D._out:
                raise NotAFunctor(f"object {x!r} is not sent to an object")
        for a in C.arrows:
            b = self.arrow_map.get(a)
            if b not in D.src:
                raise NotAFunctor(f"arrow {a!r} is not sent to an arrow")
            if D.src[b] != self.object_map[C.src[a]] or D.dst[b] != self.object_map[C.dst[a]]:
                raise NotAFunctor(f"arrow {a!r} is sent to {b!r} with mismatched endpoints")
        for x in C.objects:
            if self.arrow_map[C.identity[x]] != D.identity[self.object_map[x]]:
                raise NotAFunctor(f"identity of {x!r} is not preserved")
        for (g, f), h in C.compose_table.items():
            if D.compose_table[(self.arrow_map[g], self.arrow_map[f])] != self.arrow_map[h]:
                raise NotAFunctor(f"composite {g!r} ∘ {f!r} is not preserved")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.object_map == other.object_map
            and self.arrow_map == other.arrow_map
            and self.domain == other.domain
            and self.codomain == other.codomain
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted(map(repr, self.object_map.items()))))

    def __repr__(self) -> str:
        return f"Functor({self.object_map!r})"

    def key(self) -> tuple:
        return tuple(self.object_map[x] for x in self.domain.objects) + tuple(
            self.arrow_map[a] for a in self.domain.arrows
        )

    def restrict(self, objects: Iterable) -> Functor:
        sub = self.domain.full_subcategory(objects)
        return Functor(
            sub,
            self.codomain,
            {x: self.object_map[x] for x in sub.objects},
            {a: self.arrow_map[a] for a in sub.arrows},
            check=False,
        )


def identity_functor(C: FinCat) -> Functor:
    return Functor(C, C, {x: x for x in C.objects}, {a: a for a in C.arrows}, check=False)


def constant_functor(C: FinCat, D: FinCat, d) -> Functor:
    e = D.identity[d]
    return Functor(C, D, {x: d for x in C.objects}, {a: e for a in C.arrows}, check=False)


def compose_functors(G: Functor, F: Functor) -> Functor:
    if F.codomain != G.domain:
        raise DomainMismatch("functors are not composable")
    return Functor(
        F.domain,
        G.codomain,
        {x: G.object_map[y] for x, y in F.object_map.items()},
        {a: G.arrow_map[b] for a, b in F.arrow_map.items()},
        check=False,
    )


def opposite_functor(F: Functor) -> Functor:
    return Functor(opposite_category(F.domain), opposite_category(F.codomain), F.object_map, F.arrow_map, check=False)


def functor_from_order_map(F: OrderMap, C: FinCat | None = None, D: FinCat | None = None) -> Functor:
    C = from_poset(F.domain) if C is None else C
    D = from_poset(F.codomain) if D is None else D
    om = F.assignment
    am = {a: _pair_arrow(om[a[1]], om[a[2]]) for a in C.arrows}
    return Functor(C, D, om, am, check=False)


def order_map_from_functor(F: Functor) -> OrderMap:
    P, Q = to_poset(F.domain), to_poset(F.codomain)
    return OrderMap(P, Q, [Q.index(F.object_map[x]) for x in P.elements])


def group_homomorphism(C: FinCat, D: FinCat, mapping: Mapping) -> Functor:
    """Functor between one-object categories from an arrow-level mapping."""
    (x,) = C.objects
    (y,) = D.objects
    return Functor(C, D, {x: y}, mapping)


def iter_functors(C: FinCat, D: FinCat) -> Iterator[Functor]:
    """Every functor ``C -> D`` (object assignment, then arrows by backtracking)."""
    objs = C.objects
    arrows = [a for a in C.arrows if not C.is_identity(a)]

    def arrow_rec(om: dict, k: int, am: dict):
        if k == len(arrows):
            full = dict(am)
            for x in objs:
                full[C.identity[x]] = D.identity[om[x]]
            for (g, f), h in C.compose_table.items():
                if D.compose_table[(full[g], full[f])] != full[h]:
                    return
            yield Functor(C, D, om, full, check=False)
            return
        a = arrows[k]
        for b in D.hom(om[C.src[a]], om[C.dst[a]]):
            am[a] = b
            # prune on composites whose factors are already assigned
            ok = True
            for j in range(k + 1):
                f = arrows[j]
                for g, ff in ((a, f), (f, a)):
                    h = C.compose_table.get((g, ff))
                    if h is not None and h in am and not C.is_identity(h):
                        if D.compose_table[(am[g], am[ff])] != am[h]:
                            ok = False
                            break
                if not ok:
                    break
            if ok:
                yield from arrow_rec(om, k + 1, am)
            del am[a]

    for images in cartesian(D.objects, repeat=len(objs)):
        om = dict(zip(objs, images))
        yield from arrow_rec(om, 0, {})
