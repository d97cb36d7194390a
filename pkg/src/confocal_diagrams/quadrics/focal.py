"""
Focal projection of one paraboloid onto the plane orthogonal to another.

Projecting ∂P(y, λ) ∩ P(z, μ) along y onto {y}⊥ gives a disc with center
c = 2λ π_y(z) / ‖y − z‖² and squared radius r² = 4λμ / ‖y − z‖². The map
(z, μ) ↦ (c, r²) is a bijection onto discs with positive radius, and both
directions stay rational.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..core.exceptions import GeometryError
from ..kernel.rational import parse_rational, rationalize
from .types import DiscSpec, Paraboloid, UnitDirection, frame_of


def direction_from_stereographic(a, b) -> UnitDirection:
    """(2a, 2b, a² + b² − 1) / (a² + b² + 1), an exactly unit rational vector."""
    a = parse_rational(a)
    b = parse_rational(b)
    s = a * a + b * b
    return UnitDirection((2 * a / (s + 1), 2 * b / (s + 1), (s - 1) / (s + 1)))


def stereographic_of_direction(u: Sequence[float]) -> tuple[float, float]:
    """Inverse of `direction_from_stereographic` in floating point (u ≠ north pole)."""
    x, y, z = (float(c) for c in u)
    return x / (1.0 - z), y / (1.0 - z)


def rational_direction(u: Sequence[float] | np.ndarray, bits: int = 52) -> UnitDirection:
    """
    Exactly unit rational direction close to the float vector `u`.

    Projects from whichever pole is farther from `u` so the stereographic
    coordinates stay bounded.
    """
    v = np.asarray(u, dtype=float)
    v = v / np.linalg.norm(v)
    flip = v[2] > 0
    if flip:
        v = v * np.array([1.0, 1.0, -1.0])
    a, b = stereographic_of_direction(v)
    d = direction_from_stereographic(rationalize(a, bits), rationalize(b, bits))
    if flip:
        return UnitDirection((d.y[0], d.y[1], -d.y[2]))
    return d


def focal_projection(base: Paraboloid, other: Paraboloid) -> DiscSpec:
    """
    Disc obtained by projecting ∂P(base) ∩ P(other) onto {y}⊥.

    Raises:
        GeometryError: If both paraboloids share their direction.
    """
    y = base.direction.y
    z = other.direction.y
    if y == z:
        raise GeometryError("focal projection needs distinct directions")
    lam, mu = base.focal, other.focal
    diff2 = sum((a - b) ** 2 for a, b in zip(y, z))
    t = sum(a * b for a, b in zip(y, z))
    proj = tuple(b - t * a for a, b in zip(y, z))
    center = tuple(2 * lam * c / diff2 for c in proj)
    return DiscSpec(base.direction, center, 4 * lam * mu / diff2)  # type: ignore[arg-type]


def invert_focal_map(base: Paraboloid, disc: DiscSpec) -> Paraboloid:
    """
    The paraboloid (z, μ) whose focal projection from `base` is `disc`.

    With τ² = ‖c‖²/λ², z = ((τ² − 1) y + 2c/λ) / (τ² + 1); a disc centered
    at the origin gives z = −y. Then μ = r² ‖y − z‖² / (4λ).

    Raises:
        GeometryError: If the disc has zero radius or another base direction.
    """
    if disc.radius2 <= 0:
        raise GeometryError("disc radius must be positive", {"r2": str(disc.radius2)})
    if disc.base != base.direction:
        raise GeometryError("disc lives in the plane of another direction")
    y = base.direction.y
    lam = base.focal
    c = disc.center3
    tau2 = sum(v * v for v in c) / (lam * lam)
    z = tuple(((tau2 - 1) * a + 2 * b / lam) / (tau2 + 1) for a, b in zip(y, c))
    diff2 = sum((a - b) ** 2 for a, b in zip(y, z))
    mu = disc.radius2 * diff2 / (4 * lam)
    return Paraboloid(UnitDirection(z), mu)  # type: ignore[arg-type]


def disc_from_frame(base: UnitDirection, center: tuple[float, float] | tuple[Fraction, Fraction],
                    radius2, bits: int = 52) -> DiscSpec:
    """
    Disc given by frame coordinates of its center.

    The frame is irrational in general, so the 3D center is rationalized
    and then projected exactly onto {y}⊥.
    """
    e1, e2 = frame_of(base)
    c = float(center[0]) * e1 + float(center[1]) * e2
    approx = [rationalize(float(v), bits) for v in c]
    t = sum(a * b for a, b in zip(approx, base.y))
    exact = tuple(a - t * b for a, b in zip(approx, base.y))
    return DiscSpec(base, exact, parse_rational(radius2))  # type: ignore[arg-type]
