"""JSON file formats for posets, maps, categories, functors and simplicial complexes.

Anywhere a poset, category or complex is expected, a file may give either an
inline object or a path (resolved against the referring file's directory).
Unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .category import FinCat, Functor, build_category
from .errors import InputError, UnknownElement
from .poset import FinPoset, OrderMap, build_order_map, build_poset
from .serialize import from_json_id, jsonable, label
from .simplicial import SComplex, SMap, build_smap

POSET_KEYS = {"elements", "relations"}
CATEGORY_KEYS = {"objects", "arrows", "compose"}
COMPLEX_KEYS = {"vertices", "facets"}
MAP_KEYS = {"domain", "codomain", "assignment"}
FUNCTOR_KEYS = {"domain", "codomain", "objects", "arrows"}


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _check_keys(obj: Any, allowed: set, what: str, required: set | None = None) -> None:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be a JSON object")
    extra = set(obj) - allowed
    if extra:
        raise InputError(f"{what}: unknown key(s) {sorted(extra)}")
    missing = (allowed if required is None else required) - set(obj)
    if missing:
        raise InputError(f"{what}: missing key(s) {sorted(missing)}")


def _resolve(ref: Any, base: Path) -> tuple[Any, Path]:
    if isinstance(ref, str):
        p = base / ref
        return read_json(p), p.parent
    return ref, base


def _ids(values: Any, what: str) -> list:
    if not isinstance(values, list):
        raise InputError(f"{what} must be a list")
    return [from_json_id(v) for v in values]


def _lookup(keyed: dict, key: str, what: str):
    try:
        return keyed[key]
    except KeyError:
        raise UnknownElement(f"{what}: unknown identifier {key!r}") from None


# -- posets ----------------------------------------------------------------


def poset_from_json(obj: Any) -> FinPoset:
    _check_keys(obj, POSET_KEYS, "poset", {"elements"})
    elements = _ids(obj["elements"], "elements")
    rels = obj.get("relations", [])
    if not isinstance(rels, list) or any(not isinstance(r, list) or len(r) != 2 for r in rels):
        raise InputError("relations must be a list of [lower, upper] pairs")
    return build_poset(elements, [(from_json_id(a), from_json_id(b)) for a, b in rels])


def poset_to_json(P: FinPoset) -> dict:
    return {"elements": jsonable(list(P.elements)), "relations": jsonable([list(h) for h in P.hasse])}


def load_poset(path: str | Path) -> FinPoset:
    return poset_from_json(read_json(path))


# -- categories ------------------------------------------------------------


def category_from_json(obj: Any) -> FinCat:
    _check_keys(obj, CATEGORY_KEYS, "category", {"objects"})
    objects = _ids(obj["objects"], "objects")
    arrows = []
    for a in obj.get("arrows", []):
        _check_keys(a, {"name", "src", "dst"}, "arrow")
        arrows.append((from_json_id(a["name"]), from_json_id(a["src"]), from_json_id(a["dst"])))
    comp = []
    for entry in obj.get("compose", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise InputError("compose entries are [g, f, g∘f] triples")
        comp.append(tuple(from_json_id(x) for x in entry))
    return build_category(objects, arrows, comp)


def category_to_json(C: FinCat) -> dict:
    """Identities are left implicit; composites that produce one use the reader's ``id_<object>`` name."""
    ids = {e: f"id_{x}" for x, e in C.identity.items()}
    return {
        "objects": jsonable(list(C.objects)),
        "arrows": [
            {"name": jsonable(a), "src": jsonable(C.src[a]), "dst": jsonable(C.dst[a])} for a in C.arrows if a not in ids
        ],
        "compose": [
            jsonable([g, f, ids.get(h, h)]) for (g, f), h in C.compose_table.items() if g not in ids and f not in ids
        ],
    }


def load_category(path: str | Path) -> FinCat:
    return category_from_json(read_json(path))


# -- complexes -------------------------------------------------------------


def complex_from_json(obj: Any) -> SComplex:
    _check_keys(obj, COMPLEX_KEYS, "complex")
    vertices = _ids(obj["vertices"], "vertices")
    facets = [_ids(f, "facet") for f in obj["facets"]] if isinstance(obj["facets"], list) else None
    if facets is None:
        raise InputError("facets must be a list of vertex lists")
    try:
        return SComplex(vertices, facets)
    except ValueError as e:
        raise InputError(str(e)) from None


def complex_to_json(K: SComplex) -> dict:
    return {"vertices": jsonable(list(K.vertices)), "facets": jsonable([list(f) for f in K.facets])}


# -- maps ------------------------------------------------------------------


def _structure(obj: Any):
    """Guess the structure type of an inline object from its keys."""
    if isinstance(obj, dict):
        if "vertices" in obj:
            return complex_from_json(obj)
        if "objects" in obj:
            return category_from_json(obj)
        if "elements" in obj:
            return poset_from_json(obj)
    raise InputError("domain/codomain must be a poset, category or complex object (or a path to one)")


def _keyed(ids) -> dict:
    return {label(x): x for x in ids}


def map_from_json(obj: Any, base: str | Path = ".") -> OrderMap | Functor | SMap:
    """An order map, functor or simplicial map, depending on the domain's type."""
    base = Path(base)
    if not isinstance(obj, dict):
        raise InputError("a map file must be a JSON object")
    dom_obj, _ = _resolve(obj.get("domain"), base)
    cod_obj, _ = _resolve(obj.get("codomain"), base)
    dom, cod = _structure(dom_obj), _structure(cod_obj)
    if type(dom) is not type(cod):
        raise InputError("domain and codomain must be of the same kind")
    if isinstance(dom, FinCat):
        _check_keys(obj, FUNCTOR_KEYS, "functor")
        ko, ka = _keyed(dom.objects), _keyed(dom.arrows)
        co, ca = _keyed(cod.objects), _keyed(cod.arrows)
        omap = {_lookup(ko, k, "functor objects"): _lookup(co, label(from_json_id(v)), "functor objects") for k, v in obj["objects"].items()}
        amap = {_lookup(ka, k, "functor arrows"): _lookup(ca, label(from_json_id(v)), "functor arrows") for k, v in obj["arrows"].items()}
        return Functor(dom, cod, omap, amap)
    _check_keys(obj, MAP_KEYS, "map")
    assignment = obj["assignment"]
    if not isinstance(assignment, dict):
        raise InputError("assignment must be an object")
    if isinstance(dom, SComplex):
        kd, kc = _keyed(dom.vertices), _keyed(cod.vertices)
        vmap = {_lookup(kd, k, "assignment"): _lookup(kc, label(from_json_id(v)), "assignment") for k, v in assignment.items()}
        return build_smap(dom, cod, vmap)
    kd, kc = _keyed(dom.elements), _keyed(cod.elements)
    amap = {_lookup(kd, k, "assignment"): _lookup(kc, label(from_json_id(v)), "assignment") for k, v in assignment.items()}
    return build_order_map(dom, cod, amap)


def load_map(path: str | Path) -> OrderMap | Functor | SMap:
    path = Path(path)
    return map_from_json(read_json(path), path.parent)


def map_to_json(F: OrderMap) -> dict:
    return {
        "domain": poset_to_json(F.domain),
        "codomain": poset_to_json(F.codomain),
        "assignment": jsonable(F.assignment),
    }


def load_structure(path: str | Path):
    """A poset, category or complex file."""
    return _structure(read_json(path))


__all__ = [
    "category_from_json",
    "category_to_json",
    "complex_from_json",
    "complex_to_json",
    "load_category",
    "load_map",
    "load_poset",
    "load_structure",
    "map_from_json",
    "map_to_json",
    "poset_from_json",
    "poset_to_json",
    "read_json",
]
