"""Named example posets and categories used throughout docs and tests."""

from __future__ import annotations

from itertools import permutations

from .category import FinCat, Functor, cyclic_group_category, group_category
from .poset import FinPoset, build_poset


def chain2() -> FinPoset:
    """C2: 0 < 1."""
    return build_poset([0, 1], [(0, 1)])


def chain(n: int) -> FinPoset:
    return build_poset(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def pseudo_circle() -> FinPoset:
    """S: a, b below both c and d; the four-point model of the circle."""
    return build_poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def contractible_five_point() -> FinPoset:
    """W: x, y <= z, w, t and z <= w, t.  Contractible without a minimum or maximum."""
    rel = [("x", "z"), ("x", "w"), ("x", "t"), ("y", "z"), ("y", "w"), ("y", "t"), ("z", "w"), ("z", "t")]
    return build_poset("xyzwt", rel)


def point() -> FinPoset:
    return build_poset(["*"])


def z2() -> FinCat:
    return cyclic_group_category(2)


def z3() -> FinCat:
    return cyclic_group_category(3)


def s3() -> FinCat:
    """Symmetric group on three letters; arrows are permutation tuples, composed as functions."""
    elems = sorted(permutations(range(3)))
    return group_category(elems, lambda g, f: tuple(g[f[i]] for i in range(3)))


def trivial_hom(C: FinCat, D: FinCat) -> Functor:
    (x,) = C.objects
    (y,) = D.objects
    e = D.identity[y]
    return Functor(C, D, {x: y}, {a: e for a in C.arrows})


def conjugation(C: FinCat, h) -> Functor:
    """Inner automorphism ``g -> h g h^-1`` of a one-object group category."""
    (x,) = C.objects
    e = C.identity[x]
    inv = next(k for k in C.arrows if C.compose_table[(h, k)] == e)
    comp = C.compose_table
    return Functor(C, C, {x: x}, {g: comp[(comp[(h, g)], inv)] for g in C.arrows})
