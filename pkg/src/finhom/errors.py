"""Exception hierarchy shared by every finhom module."""

from __future__ import annotations


class FinhomError(Exception):
    """Base class for all library errors."""


class InputError(FinhomError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class CycleError(InputError):
    """The reflexive-transitive closure of the relations is not antisymmetric."""


class DuplicateElement(InputError):
    pass


class UnknownElement(InputError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return Exception.__str__(self)


class NotMonotone(InputError):
    """An assignment breaks monotonicity; ``pair`` is the violating ``(x, y)`` with x <= y."""

    def __init__(self, message: str, pair: tuple | None = None):
        super().__init__(message)
        self.pair = pair


class DomainMismatch(InputError):
    pass


class NotConnected(InputError):
    pass


class MissingComposite(InputError):
    pass


class NotAssociative(InputError):
    def __init__(self, message: str, triple: tuple | None = None):
        super().__init__(message)
        self.triple = triple


class BadEndpoints(InputError):
    pass


class NotAPosetCategory(InputError):
    pass


class NotAcyclic(InputError):
    pass


class UnsupportedCategoryShape(InputError):
    pass


class NotAFunctor(InputError):
    pass


class NotSimplicial(InputError):
    pass


class SizeGuardExceeded(InputError):
    pass


class SearchCapExceeded(FinhomError):
    """A bounded search ran out of budget; the question is undecided, not answered "no"."""

    def __init__(self, message: str, visited: int = 0):
        super().__init__(message)
        self.visited = visited


class InvariantViolation(FinhomError):
    """A result failed its own certificate check (CLI exit code 1)."""
