"""Generic-position test of paraboloid families."""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from ..core.logging_config import get_logger
from ..kernel import solve_exact
from ..power.weighted_point import WeightedPoint
from .reductions import quadrics_to_points
from .types import DiagramKind, Paraboloid

logger = get_logger(__name__)


def _meets_sphere(quad: Sequence[WeightedPoint]) -> bool:
    """True when some point of equal power to the four sites lies on S²."""
    p0 = quad[0]
    rows = [[2 * (a - b) for a, b in zip(q.position, p0.position)] for q in quad[1:]]
    rhs = [q.lift - p0.lift for q in quad[1:]]
    solution = solve_exact(rows, rhs)
    if solution is None:
        return False
    if not solution.null_basis:
        return sum(c * c for c in solution.particular) == 1
    # a line or plane of equal-power points reaches the sphere iff its
    # closest point to the origin lies in the closed ball
    x0 = solution.least_norm_point()
    return sum(c * c for c in x0) <= 1


def is_generic(paraboloids: Sequence[Paraboloid]) -> bool:
    """
    True iff no four boundaries ∂P(y_i, λ_i) share a point.

    Equivalently, for every quadruple of PI weighted points, no point of
    equal power lies on the unit sphere. Exact, O(N⁴).
    """
    points = quadrics_to_points(paraboloids, DiagramKind.PARABOLOID_INTERSECTION)
    for quad in combinations(points, 4):
        if _meets_sphere(quad):
            logger.debug("Non-generic quadruple %s", [p.index for p in quad])
            return False
    return True
