"""Confocal quadrics of revolution and related value types."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from ..core.exceptions import GeometryError
from ..kernel.rational import parse_rational

Vector3 = tuple[Fraction, Fraction, Fraction]


class DiagramKind(str, Enum):
    """Which envelope a diagram describes."""

    PARABOLOID_INTERSECTION = "pi"
    PARABOLOID_UNION = "pu"
    ELLIPSOID_INTERSECTION = "ei"
    ELLIPSOID_UNION = "eu"

    @property
    def is_union(self) -> bool:
        return self in (DiagramKind.PARABOLOID_UNION, DiagramKind.ELLIPSOID_UNION)

    @property
    def is_ellipsoid(self) -> bool:
        return self in (DiagramKind.ELLIPSOID_INTERSECTION, DiagramKind.ELLIPSOID_UNION)

    @classmethod
    def parse(cls, value: "str | DiagramKind") -> "DiagramKind":
        if isinstance(value, DiagramKind):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown diagram kind {value!r}; expected one of pi, pu, ei, eu") from None


@dataclass(frozen=True)
class UnitDirection:
    """Rational vector of exactly unit norm."""

    y: Vector3

    def __post_init__(self) -> None:
        if len(self.y) != 3:
            raise GeometryError("direction must have 3 coordinates")
        coords = tuple(parse_rational(c) for c in self.y)
        object.__setattr__(self, "y", coords)
        n2 = sum(c * c for c in coords)
        if n2 != 1:
            raise GeometryError("direction is not exactly unit", {"norm2": str(n2)})

    @classmethod
    def of(cls, *coords) -> "UnitDirection":
        if len(coords) == 1:
            coords = tuple(coords[0])
        return cls(tuple(coords))  # type: ignore[arg-type]

    def __iter__(self):
        return iter(self.y)

    def __getitem__(self, k: int) -> Fraction:
        return self.y[k]

    def __neg__(self) -> "UnitDirection":
        return UnitDirection(tuple(-c for c in self.y))  # type: ignore[arg-type]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array([float(c) for c in self.y])


@dataclass(frozen=True)
class Paraboloid:
    """Solid paraboloid of revolution with focus at the origin, axis y and focal distance λ."""

    direction: UnitDirection
    focal: Fraction

    def __post_init__(self) -> None:
        focal = parse_rational(self.focal)
        object.__setattr__(self, "focal", focal)
        if focal <= 0:
            raise GeometryError("focal distance must be positive", {"lambda": str(focal)})

    def scaled(self, t: Fraction) -> "Paraboloid":
        return Paraboloid(self.direction, self.focal * t)


@dataclass(frozen=True)
class Ellipsoid:
    """
    Solid ellipsoid of revolution with one focus at the origin, the other at
    m·ŷ, and eccentricity e. Its radial function is d / (1 − e⟨u, ŷ⟩) with
    d = m(1 − e²)/(2e).
    """

    direction: UnitDirection
    distance: Fraction
    eccentricity: Fraction

    def __post_init__(self) -> None:
        m = parse_rational(self.distance)
        e = parse_rational(self.eccentricity)
        object.__setattr__(self, "distance", m)
        object.__setattr__(self, "eccentricity", e)
        if m <= 0:
            raise GeometryError("focus distance must be positive", {"m": str(m)})
        if not 0 < e < 1:
            raise GeometryError("eccentricity must lie in (0, 1)", {"e": str(e)})

    @cached_property
    def d(self) -> Fraction:
        e = self.eccentricity
        return self.distance * (1 - e * e) / (2 * e)


Quadric = Union[Paraboloid, Ellipsoid]


def frame_of(direction: UnitDirection) -> tuple[np.ndarray, np.ndarray]:
    """
    Orthonormal frame (e1, e2) of the plane {y}⊥ with e1 × e2 = y.

    e1 is the coordinate axis least aligned with y (first one on ties),
    orthonormalized against y.
    """
    y = direction.array
    axis = int(np.argmin(np.abs(y)))
    e1 = np.zeros(3)
    e1[axis] = 1.0
    e1 = e1 - y[axis] * y
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(y, e1)
    return e1, e2


@dataclass(frozen=True)
class DiscSpec:
    """
    Disc in the plane {y}⊥ of a base direction y.

    The center is kept as an exact 3-vector orthogonal to y and the radius
    as its square; `center` gives approximate coordinates in the frame of
    `frame_of(y)`.
    """

    base: UnitDirection
    center3: Vector3
    radius2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "center3", tuple(parse_rational(c) for c in self.center3))
        object.__setattr__(self, "radius2", parse_rational(self.radius2))
        if self.radius2 < 0:
            raise GeometryError("negative squared radius", {"r2": str(self.radius2)})
        if sum(a * b for a, b in zip(self.center3, self.base.y)) != 0:
            raise GeometryError("disc center is not orthogonal to its base direction")

    @property
    def center(self) -> tuple[float, float]:
        e1, e2 = frame_of(self.base)
        c = np.array([float(v) for v in self.center3])
        return float(c @ e1), float(c @ e2)

    @property
    def radius(self) -> float:
        return float(self.radius2) ** 0.5


def directions_of(quadrics: Sequence[Quadric]) -> np.ndarray:
    """(N, 3) float array of axis directions."""
    return np.array([q.direction.array for q in quadrics]).reshape(-1, 3)
