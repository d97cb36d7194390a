"""Symbolic boundary of intersection cells: vertices, oriented arcs, cycles."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Iterator, Mapping

import numpy as np

if TYPE_CHECKING:
    from .geometry import DiagramGeometry

Vector3 = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class SphereVertex:
    """
    A point where a ridge meets the sphere.

    `ridge` is the sorted site triple of the ridge and `root` tells which
    of its two sphere points is meant (0: lower ⟨x, axis⟩, see `Ridge.axis`).
    A vertex sitting exactly on a dual vertex of the power diagram is named
    by that point instead (`ridge == ()`, `root == -1`), so that every
    ridge through it yields the same vertex.
    """

    ridge: tuple[int, ...]
    root: int
    point: Vector3 | None = None

    @classmethod
    def at(cls, point: Vector3) -> "SphereVertex":
        return cls((), -1, tuple(point))  # type: ignore[arg-type]

    @property
    def is_pinned(self) -> bool:
        return self.point is not None

    def __str__(self) -> str:
        if self.point is not None:
            return "@(" + ", ".join(str(c) for c in self.point) + ")"
        return f"{self.ridge}#{self.root}"


@dataclass(frozen=True)
class OrientedArc:
    """
    Arc of the circle cut by the radical plane of (site, other).

    Walking from source to target the cell of `site` is on the right; the
    arc turns positively about p_other − p_site. A full circle has neither
    source nor target.
    """

    site: int
    other: int
    source: SphereVertex | None = None
    target: SphereVertex | None = None
    zero_length: bool = False

    @property
    def is_full_circle(self) -> bool:
        return self.source is None

    @property
    def pair(self) -> tuple[int, int]:
        return (self.site, self.other) if self.site < self.other else (self.other, self.site)

    def reversed(self) -> "OrientedArc":
        """The same arc as seen from the other cell."""
        return OrientedArc(self.other, self.site, self.target, self.source, self.zero_length)

    @property
    def canonical(self) -> "OrientedArc":
        """Orientation seen from the lower site index."""
        return self if self.site < self.other else self.reversed()

    @property
    def key(self) -> tuple:
        c = self.canonical
        return (c.site, c.other, c.source, c.target)


@dataclass(frozen=True)
class Cycle:
    """Connected component of a cell boundary: arcs chained target to source."""

    arcs: tuple[OrientedArc, ...]

    def __iter__(self) -> Iterator[OrientedArc]:
        return iter(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    @property
    def is_full_circle(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].is_full_circle

    @property
    def zero_length(self) -> bool:
        return all(a.zero_length for a in self.arcs)

    @property
    def vertices(self) -> list[SphereVertex]:
        return [a.source for a in self.arcs if a.source is not None]


@dataclass(frozen=True)
class IntersectionCell:
    """
    The part of the sphere lying in the power cell of `site`.

    A cell without cycles is either empty or the whole sphere. `planes`
    holds the radical plane ⟨n, x⟩ = h of every power-diagram neighbor,
    oriented so that the cell is on the side ⟨n, x⟩ <= h.
    """

    site: int
    cycles: tuple[Cycle, ...] = ()
    hidden: bool = False
    whole_sphere: bool = False
    planes: Mapping[int, tuple[Vector3, Fraction]] = field(default_factory=dict, compare=False, repr=False)
    geometry: "DiagramGeometry | None" = field(default=None, compare=False, repr=False)

    @property
    def is_empty(self) -> bool:
        return not self.whole_sphere and not any(not c.zero_length for c in self.cycles)

    def arcs(self, include_zero_length: bool = True) -> list[OrientedArc]:
        return [a for c in self.cycles for a in c if include_zero_length or not a.zero_length]

    def vertices(self, include_zero_length: bool = True) -> set[SphereVertex]:
        out: set[SphereVertex] = set()
        for a in self.arcs(include_zero_length):
            if a.source is not None:
                out.add(a.source)
                out.add(a.target)  # type: ignore[arg-type]
        return out

    def contains(self, directions: np.ndarray) -> np.ndarray:
        """Membership of unit vectors (M, 3) in the region bounded by the cycles."""
        from .geometry import cell_contains

        return cell_contains(self, directions)
