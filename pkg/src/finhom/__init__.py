"""Homotopic distances between maps of finite posets and functors of finite categories."""

from .category import FinCat, Functor, build_category, group_category
from .distance import (
    DistanceReport,
    brute_force_distance,
    ccat,
    ccat_functor,
    cat_open,
    ctc,
    distance_categorical,
    distance_open,
)
from .errors import FinhomError, InputError, InvariantViolation, SearchCapExceeded
from .extnat import ExtNat
from .homotopy import HomotopyFence, check_fence, core, homotopic
from .poset import FinPoset, OrderMap, SubPoset, build_order_map, build_poset
from .simplicial import (
    SComplex,
    SMap,
    contiguity_distance,
    mccord,
    order_complex,
    stabilize,
    subdivide,
)

__version__ = "0.1.0"

__all__ = [
    "DistanceReport",
    "ExtNat",
    "FinCat",
    "FinPoset",
    "FinhomError",
    "Functor",
    "HomotopyFence",
    "InputError",
    "InvariantViolation",
    "OrderMap",
    "SComplex",
    "SMap",
    "SearchCapExceeded",
    "SubPoset",
    "brute_force_distance",
    "build_category",
    "build_order_map",
    "build_poset",
    "cat_open",
    "ccat",
    "ccat_functor",
    "check_fence",
    "contiguity_distance",
    "core",
    "ctc",
    "distance_categorical",
    "distance_open",
    "group_category",
    "homotopic",
    "mccord",
    "order_complex",
    "stabilize",
    "subdivide",
]
