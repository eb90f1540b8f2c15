from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ExtNat:
    """A finite value, infinity, or an undecided bracket ``[lower, upper]``.

    ``upper`` may be None when no finite upper bound is known.
    """

    kind: str  # "finite" | "infinite" | "inconclusive"
    value: int | None = None
    lower: int | None = None
    upper: int | None = None

    @classmethod
    def finite(cls, n: int) -> ExtNat:
        if n < 0:
            raise ValueError("distances are non-negative")
        return cls("finite", n)

    @classmethod
    def infinity(cls) -> ExtNat:
        return cls("infinite")

    @classmethod
    def inconclusive(cls, lower: int, upper: int | None) -> ExtNat:
        return cls("inconclusive", None, lower, upper)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    @property
    def is_inconclusive(self) -> bool:
        return self.kind == "inconclusive"

    def as_number(self) -> float:
        """Finite value or ``inf``; raises on inconclusive values."""
        if self.kind == "finite":
            return self.value
        if self.kind == "infinite":
            return float("inf")
        raise ValueError(f"undecided value {self}")

    def to_json(self):
        if self.kind == "finite":
            return self.value
        if self.kind == "infinite":
            return "inf"
        return {"inconclusive": [self.lower, "inf" if self.upper is None else self.upper]}

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        if self.kind == "infinite":
            return "inf"
        return f"inconclusive[{self.lower}, {'inf' if self.upper is None else self.upper}]"

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.kind == "finite" and self.value == other
        if isinstance(other, ExtNat):
            return (self.kind, self.value, self.lower, self.upper) == (
                other.kind,
                other.value,
                other.lower,
                other.upper,
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.kind, self.value, self.lower, self.upper))
