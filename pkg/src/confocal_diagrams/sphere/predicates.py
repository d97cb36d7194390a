"""
Exact predicates between the unit sphere and pieces of a power diagram.

Every decision is the sign of a polynomial in the rational input data,
evaluated through `sign_filtered`. No point on the sphere is constructed:
a crossing of a ridge with the sphere is named by the ridge's site triple
and by which of the two roots of ‖o + s·d‖² = 1 it is.

For a ridge x(s) = o + s·d we write q(s) = A s² + 2 B s + C with
A = ‖d‖², B = ⟨o, d⟩, C = ‖o‖² − 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..core.exceptions import CoincidentSitesError
from ..kernel import sign_filtered, to_interval
from ..kernel.linalg import add, cross, dot, norm2
from ..power.facets import Facet, Ridge, RidgeKind

Vector3 = tuple[Fraction, Fraction, Fraction]

SECANT = math.inf


# ---------------- polynomial expressions ----------------

def _q0(o, d):
    return norm2(o) - 1


def _q1(o, d):
    return norm2(add(o, d)) - 1


def _b(o, d):
    return dot(o, d)


def _a_plus_b(o, d):
    return norm2(d) + dot(o, d)


def _disc(o, d):
    b = dot(o, d)
    return b * b - norm2(d) * (norm2(o) - 1)


class _RidgeSigns:
    """Sign oracle for the quadratic of one ridge, sharing interval data."""

    def __init__(self, origin: Sequence, direction: Sequence):
        self.o = tuple(origin)
        self.d = tuple(direction)
        self._iargs = to_interval((self.o, self.d))

    def __call__(self, expression) -> int:
        return sign_filtered(expression, self.o, self.d, interval_args=self._iargs)


# ---------------- point and plane predicates ----------------

def has_on(x: Sequence[Fraction]) -> int:
    """+1, 0 or −1 when `x` is outside, on or inside the unit sphere."""
    return sign_filtered(lambda p: norm2(p) - 1, tuple(x))


def plane_crossing_sphere(facet: Facet) -> float:
    """
    Number of points shared by the supporting plane of `facet` and the
    sphere: 0, 1 or `SECANT` (infinitely many).

    Raises:
        CoincidentSitesError: If the plane normal vanishes.
    """
    n, h = facet.normal, facet.offset
    if not any(n):
        raise CoincidentSitesError("facet of coincident sites has no plane",
                                   {"sites": [facet.i, facet.j]})
    s = sign_filtered(lambda nn, hh: hh * hh - norm2(nn), tuple(n), h)
    if s < 0:
        return SECANT
    return 1 if s == 0 else 0


def _center_left_of(facet: Facet, ridge: Ridge) -> int:
    """
    Side of the circle center h·n/‖n‖² with respect to the ridge line,
    inside the facet plane: +1 on the facet side, 0 on the line.

    With c the projection of the origin on the plane, ⟨n × d, c − o⟩ has
    the sign of −⟨n × d, o⟩.
    """
    return -sign_filtered(lambda n, d, o: dot(cross(n, d), o),
                          tuple(facet.normal), tuple(ridge.direction), tuple(ridge.origin))


def circle_center_in_facet(facet: Facet) -> bool:
    """
    True iff the center of the circle cut from the sphere by the facet
    plane lies in the (possibly unbounded) convex facet. A center on the
    facet boundary counts as inside.
    """
    return all(_center_left_of(facet, r) >= 0 for r in facet.ridges if not r.is_degenerate)


# ---------------- ridge counts ----------------

def segment_sphere_intersections(x0: Sequence[Fraction], x1: Sequence[Fraction]) -> int:
    """
    Number of parameters s in [0, 1] with ‖x0 + s(x1 − x0)‖ = 1, tangency
    counted twice. A zero-length segment counts 2 when it lies on the
    sphere and 0 otherwise.
    """
    d = tuple(b - a for a, b in zip(x0, x1))
    if not any(d):
        return 2 if has_on(x0) == 0 else 0
    sg = _RidgeSigns(x0, d)
    disc = sg(_disc)
    if disc < 0:
        return 0
    if disc == 0:
        # double root at −B/A
        return 2 if sg(_b) <= 0 and sg(_a_plus_b) >= 0 else 0
    q0, q1 = sg(_q0), sg(_q1)
    if q0 < 0 and q1 < 0:
        return 0
    if q0 * q1 < 0:
        return 1
    if q0 > 0 and q1 > 0:
        return 2 if sg(_b) < 0 and sg(_a_plus_b) > 0 else 0
    if q0 == 0 and q1 == 0:
        return 2
    if q0 == 0:
        return 1 if q1 < 0 else (2 if sg(_b) < 0 else 1)
    return 1 if q0 < 0 else (2 if sg(_a_plus_b) > 0 else 1)


def ray_sphere_intersections(apex: Sequence[Fraction], direction: Sequence[Fraction]) -> int:
    """Number of s >= 0 with ‖apex + s·direction‖ = 1, tangency counted twice."""
    if not any(direction):
        return 2 if has_on(apex) == 0 else 0
    sg = _RidgeSigns(apex, direction)
    disc = sg(_disc)
    if disc < 0:
        return 0
    if disc == 0:
        return 2 if sg(_b) <= 0 else 0
    q0 = sg(_q0)
    if q0 < 0:
        return 1
    ahead = sg(_b) < 0
    if q0 > 0:
        return 2 if ahead else 0
    return 2 if ahead else 1


def line_sphere_intersections(origin: Sequence[Fraction], direction: Sequence[Fraction]) -> int:
    sg = _RidgeSigns(origin, direction)
    return 2 if sg(_disc) >= 0 else 0


def number_of_intersections(ridge: Ridge) -> int:
    """Number of points where `ridge` meets the sphere (0, 1 or 2)."""
    if ridge.kind is RidgeKind.SEGMENT:
        return segment_sphere_intersections(ridge.origin, ridge.end)  # type: ignore[arg-type]
    if ridge.kind is RidgeKind.RAY_OUT:
        return ray_sphere_intersections(ridge.origin, ridge.direction)
    if ridge.kind is RidgeKind.RAY_IN:
        return ray_sphere_intersections(ridge.origin, tuple(-c for c in ridge.direction))
    return line_sphere_intersections(ridge.origin, ridge.direction)


# ---------------- crossings used by the boundary walk ----------------

@dataclass(frozen=True)
class Crossing:
    """
    One point where the facet boundary passes the sphere.

    `root` is 0 for the crossing with the lower ⟨x, axis⟩ on the ridge line
    and 1 for the other. `pinned` is the ridge endpoint itself when the
    crossing sits exactly on a dual vertex lying on the sphere.
    """

    ridge: Ridge = field(compare=False)
    root: int
    source: bool
    pinned: Vector3 | None = None
    tangent: bool = False

    @property
    def sites(self) -> tuple[int, int, int]:
        return self.ridge.key


def ridge_crossings(ridge: Ridge) -> list[Crossing]:
    """
    Crossings of `ridge` in traversal order, for the sphere inflated by an
    infinitesimal amount: points on the sphere count as inside, and a
    tangent ridge crosses twice at the same point.

    A crossing where the boundary leaves the ball is a source of an arc,
    one where it enters the ball is a target.
    """
    if ridge.is_degenerate:
        return []
    kind = ridge.kind
    sg = _RidgeSigns(ridge.origin, ridge.direction)

    q_lo = q_hi = None
    if kind is RidgeKind.SEGMENT:
        q_lo, q_hi = sg(_q0), sg(_q1)
    elif kind is RidgeKind.RAY_OUT:
        q_lo = sg(_q0)
    elif kind is RidgeKind.RAY_IN:
        q_hi = sg(_q0)
    inside_lo = q_lo is not None and q_lo <= 0
    inside_hi = q_hi is not None and q_hi <= 0

    along = sign_filtered(lambda d, a: dot(d, a), tuple(ridge.direction), tuple(ridge.axis))
    lower = 0 if along > 0 else 1

    if inside_lo != inside_hi:
        if inside_lo:
            # leaving: larger root; it sits on the low endpoint when q(lo)=0 and B >= 0
            pinned = None
            if q_lo == 0 and sg(_b) >= 0:
                pinned = tuple(ridge.origin)
            return [Crossing(ridge, 1 - lower, True, pinned)]
        pinned = None
        if q_hi == 0:
            if kind is RidgeKind.SEGMENT and sg(_a_plus_b) <= 0:
                pinned = tuple(ridge.end)  # type: ignore[arg-type]
            elif kind is RidgeKind.RAY_IN and sg(_b) <= 0:
                pinned = tuple(ridge.origin)
        return [Crossing(ridge, lower, False, pinned)]
    if inside_lo:
        return []

    disc = sg(_disc)
    if disc < 0:
        return []
    if kind is RidgeKind.SEGMENT:
        between = sg(_b) < 0 and sg(_a_plus_b) > 0
    elif kind is RidgeKind.RAY_OUT:
        between = sg(_b) < 0
    elif kind is RidgeKind.RAY_IN:
        between = sg(_b) > 0
    else:
        between = True
    if not between:
        return []
    tangent = disc == 0
    return [Crossing(ridge, lower, False, None, tangent),
            Crossing(ridge, 1 - lower, True, None, tangent)]


def tangent_loop_collapses(facet: Facet, ridge: Ridge) -> bool:
    """
    An arc running between the two coincident crossings of a tangent ridge
    has zero length iff the circle lies on the far side of the ridge line.
    """
    return _center_left_of(facet, ridge) < 0
