"""JSON helpers: element identifiers may be nested tuples (products, subdivisions)."""

from __future__ import annotations

import json
from typing import Any


def jsonable(x: Any) -> Any:
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    if isinstance(x, frozenset):
        return sorted((jsonable(v) for v in x), key=repr)
    if isinstance(x, dict):
        return {label(k): jsonable(v) for k, v in x.items()}
    return x


def label(x: Any) -> str:
    """String form of an identifier, usable as a JSON object key."""
    if isinstance(x, str):
        return x
    return json.dumps(jsonable(x), separators=(",", ":"))


def from_json_id(x: Any) -> Any:
    """Inverse of :func:`jsonable` for identifiers: lists become tuples."""
    if isinstance(x, list):
        return tuple(from_json_id(v) for v in x)
    return x


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))
