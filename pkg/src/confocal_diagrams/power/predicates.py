"""
Orientation and power-test predicates.

The predicates work in any dimension d <= 3 on points given by id in a
`LiftedPoints` table. Coordinates may be restricted to a subset of axes,
which is how the triangulation handles flat inputs and flat hull facets.
The power test breaks exact ties by a symbolic perturbation of the lifts
in which the site with the larger id dominates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from ..core.exceptions import DegenerateSimplexError
from ..kernel import Interval, det, exact_sign, sign_filtered, to_interval
from .weighted_point import WeightedPoint

Axes = tuple[int, ...]


def orientation_expr(*points: Sequence[Any]) -> Any:
    """det[p_1 − p_0; …; p_d − p_0] for d+1 points of dimension d."""
    p0 = points[0]
    return det([[a - b for a, b in zip(p, p0)] for p in points[1:]])


def power_expr(points: Sequence[Sequence[Any]], lifts: Sequence[Any], query: Sequence[Any], query_lift: Any) -> Any:
    """
    Power-test determinant.

    Rows are [p_k − p_0, h_k − h_0] for k = 1..d followed by the query row.
    The value equals orient · (h_q − L(q)) where L interpolates the lifts.
    """
    p0, h0 = points[0], lifts[0]
    rows = [[*(a - b for a, b in zip(p, p0)), h - h0] for p, h in zip(points[1:], lifts[1:])]
    rows.append([*(a - b for a, b in zip(query, p0)), query_lift - h0])
    return det(rows)


@dataclass
class LiftedPoints:
    """Exact and interval coordinates/lifts of the sites, addressed by id."""

    coords: list[tuple[Fraction, ...]]
    lifts: list[Fraction]
    icoords: list[tuple[Interval, ...]]
    ilifts: list[Interval]

    @classmethod
    def build(cls, coords: list[tuple[Fraction, ...]], lifts: list[Fraction]) -> "LiftedPoints":
        return cls(coords, lifts, [to_interval(c) for c in coords], [Interval.of(h) for h in lifts])

    def exact(self, ids: Sequence[int], axes: Axes) -> list[tuple[Fraction, ...]]:
        return [tuple(self.coords[v][a] for a in axes) for v in ids]

    def approx(self, ids: Sequence[int], axes: Axes) -> list[tuple[Interval, ...]]:
        return [tuple(self.icoords[v][a] for a in axes) for v in ids]

    def orientation(self, ids: Sequence[int], axes: Axes) -> int:
        """Sign of the orientation determinant of the simplex `ids`."""
        return sign_filtered(
            orientation_expr,
            *self.exact(ids, axes),
            interval_args=self.approx(ids, axes),
        )

    def power_side(self, ids: Sequence[int], query: int, axes: Axes) -> int:
        """
        Perturbed power test of `query` against the simplex `ids`.

        Returns:
            −1 when the query is in conflict (below the lifted simplex), +1
            otherwise. Never 0.

        Raises:
            DegenerateSimplexError: If the simplex is flat in `axes`.
        """
        orient = self.orientation(ids, axes)
        if orient == 0:
            raise DegenerateSimplexError("flat simplex in power test", {"ids": list(ids)})
        pts = self.exact(ids, axes)
        hs = [self.lifts[v] for v in ids]
        q = tuple(self.coords[query][a] for a in axes)
        s = sign_filtered(
            power_expr,
            pts,
            hs,
            q,
            self.lifts[query],
            interval_args=(self.approx(ids, axes), [self.ilifts[v] for v in ids],
                           tuple(self.icoords[query][a] for a in axes), self.ilifts[query]),
        )
        if s == 0:
            s = self._perturbed_sign(ids, query, pts, hs, q)
        return s * orient

    def _perturbed_sign(self, ids, query, pts, hs, q) -> int:
        # D is linear in the lifts; the first non-vanishing partial
        # derivative in decreasing id order decides.
        hq = self.lifts[query]
        for v in sorted([*ids, query], reverse=True):
            if v == query:
                value = power_expr(pts, hs, q, hq + 1)
            else:
                bumped = [h + 1 if w == v else h for w, h in zip(ids, hs)]
                value = power_expr(pts, bumped, q, hq)
            s = exact_sign(value)
            if s:
                return s
        raise DegenerateSimplexError("perturbation failed to break a tie", {"ids": list(ids), "query": query})


def power_side(sites: Sequence[WeightedPoint], query: WeightedPoint) -> int:
    """
    Exact power test of `query` against the power sphere of four sites.

    Returns:
        −1 inside, 0 on, +1 outside.

    Raises:
        DegenerateSimplexError: If the four sites are coplanar.
    """
    if len(sites) != 4:
        raise ValueError("power_side needs exactly 4 sites")
    positions = [s.position for s in sites]
    orient = sign_filtered(orientation_expr, *positions)
    if orient == 0:
        raise DegenerateSimplexError("coplanar quadruple", {"indices": [s.index for s in sites]})
    d = sign_filtered(power_expr, positions, [s.lift for s in sites], query.position, query.lift)
    return d * orient
