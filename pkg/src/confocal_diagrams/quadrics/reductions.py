"""
Maps from confocal quadrics to weighted points and back.

For each diagram kind, the cell of quadric i on the unit sphere is the
intersection of the sphere with the power cell of the mapped weighted
point. All maps are rational.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..core.exceptions import GeometryError
from ..core.logging_config import get_logger
from ..kernel.rational import sqrt_bounds
from ..power.weighted_point import WeightedPoint
from .focal import rational_direction
from .types import DiagramKind, Ellipsoid, Paraboloid, Quadric, UnitDirection

logger = get_logger(__name__)


def to_weighted_point(q: Quadric, kind: DiagramKind | str, index: int = 0) -> WeightedPoint:
    """
    Weighted point whose power cell cuts out the cell of `q`.

    PI: p = −y/(2λ), ω = −1/λ − 1/(4λ²)
    PU: p =  y/(2λ), ω =  1/λ − 1/(4λ²)
    EI: p = −(e/2d)ŷ, ω = −1/d − e²/(4d²)
    EU: p =  (e/2d)ŷ, ω =  1/d − e²/(4d²)

    Raises:
        GeometryError: If the quadric type does not match the kind.
    """
    kind = DiagramKind.parse(kind)
    if isinstance(q, Paraboloid):
        if kind.is_ellipsoid:
            raise GeometryError("paraboloid given for an ellipsoid diagram", {"kind": kind.value})
        inv = 1 / q.focal
        sign = 1 if kind.is_union else -1
        position = tuple(sign * inv / 2 * c for c in q.direction.y)
        weight = sign * inv - inv * inv / 4
    elif isinstance(q, Ellipsoid):
        if not kind.is_ellipsoid:
            raise GeometryError("ellipsoid given for a paraboloid diagram", {"kind": kind.value})
        inv = 1 / q.d
        e = q.eccentricity
        sign = 1 if kind.is_union else -1
        position = tuple(sign * e * inv / 2 * c for c in q.direction.y)
        weight = sign * inv - e * e * inv * inv / 4
    else:
        raise TypeError(f"not a quadric: {q!r}")
    return WeightedPoint(position, weight, index)  # type: ignore[arg-type]


def quadrics_to_points(quadrics: Sequence[Quadric], kind: DiagramKind | str) -> list[WeightedPoint]:
    """Weighted points of a quadric family, indexed by position."""
    kind = DiagramKind.parse(kind)
    return [to_weighted_point(q, kind, k) for k, q in enumerate(quadrics)]


def _norm_bound(p: WeightedPoint) -> tuple[Fraction, bool]:
    n2 = sum(c * c for c in p.position)
    _, hi, exact = sqrt_bounds(n2)
    return hi, exact


def ellipsoids_from_weighted_points(
    points: Sequence[WeightedPoint], kind: DiagramKind | str = DiagramKind.ELLIPSOID_INTERSECTION
) -> list[Ellipsoid]:
    """
    Ellipsoids whose EI (or EU) diagram equals the power diagram of `points`.

    A common constant is first added to (EU) or subtracted from (EI) all
    weights so that every recovered eccentricity lies in (0, 1); this leaves
    the power cells unchanged.

    Raises:
        GeometryError: If a point sits at the origin or the kind is not an
            ellipsoid kind.
    """
    kind = DiagramKind.parse(kind)
    if not kind.is_ellipsoid:
        raise GeometryError("inverse map needs an ellipsoid kind", {"kind": kind.value})
    if not points:
        return []
    bounds = []
    for p in points:
        if not any(p.position):
            raise GeometryError("weighted point at the origin has no ellipsoid", {"index": p.index})
        bounds.append(_norm_bound(p))

    union = kind.is_union
    # EI needs  w + |p|^2 + 2|p| < 0 ; EU needs  w + |p|^2 - 2|p| > 0
    if union:
        slack = [-(p.weight + sum(c * c for c in p.position) - 2 * b) for p, (b, _) in zip(points, bounds)]
    else:
        slack = [p.weight + sum(c * c for c in p.position) + 2 * b for p, (b, _) in zip(points, bounds)]
    worst = max(slack)
    shift = worst + 1 if worst >= 0 else Fraction(0)
    if shift:
        logger.info("Shifting all weights by %s to reach eccentricities below 1", "+" if union else "-")

    ellipsoids = []
    inexact = 0
    for p, (bound, exact) in zip(points, bounds):
        w = p.weight + shift if union else p.weight - shift
        n2 = sum(c * c for c in p.position)
        a = w + n2
        if exact:
            norm = bound
            sign = 1 if union else -1
            direction = UnitDirection(tuple(sign * c / norm for c in p.position))  # type: ignore[arg-type]
        else:
            inexact += 1
            norm = bound
            vec = np.array([float(c) for c in p.position])
            direction = rational_direction(vec if union else -vec)
        d = 1 / a if union else -1 / a
        e = 2 * norm * d
        m = 2 * e * d / (1 - e * e)
        ellipsoids.append(Ellipsoid(direction, m, e))
    if inexact:
        logger.warning("%d of %d points have irrational norms; ellipsoids are rational approximations",
                       inexact, len(points))
    return ellipsoids
