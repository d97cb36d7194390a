"""Weighted points: the sites of a power diagram."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from ..kernel import Interval, to_interval
from ..kernel.rational import parse_rational

Vector3 = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class WeightedPoint:
    """
    Rational position `p` with rational weight `w` and a user-facing index.

    The power of a point x with respect to this site is ‖x − p‖² + w.
    """

    position: Vector3
    weight: Fraction
    index: int = 0

    def __post_init__(self) -> None:
        if len(self.position) != 3:
            raise ValueError(f"position must have 3 coordinates, got {len(self.position)}")
        object.__setattr__(self, "position", tuple(parse_rational(c) for c in self.position))
        object.__setattr__(self, "weight", parse_rational(self.weight))

    @classmethod
    def of(cls, position: Sequence, weight, index: int = 0) -> "WeightedPoint":
        return cls(tuple(position), weight, index)

    @cached_property
    def lift(self) -> Fraction:
        """‖p‖² + w, the height of the site in the lifted picture."""
        x, y, z = self.position
        return x * x + y * y + z * z + self.weight

    @cached_property
    def interval_position(self) -> tuple[Interval, Interval, Interval]:
        return to_interval(self.position)

    @cached_property
    def interval_lift(self) -> Interval:
        return Interval.of(self.lift)

    def power(self, x: Sequence[Fraction]) -> Fraction:
        """Exact power distance ‖x − p‖² + w."""
        return sum((a - b) ** 2 for a, b in zip(x, self.position)) + self.weight

    def as_floats(self) -> tuple[float, float, float, float]:
        return (*(float(c) for c in self.position), float(self.weight))


def reindex(points: Iterable[WeightedPoint]) -> list[WeightedPoint]:
    """Copy of `points` whose indices are their list positions."""
    return [WeightedPoint(p.position, p.weight, k) for k, p in enumerate(points)]
