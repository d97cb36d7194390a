"""
Floating-point realization of symbolic cell boundaries.

Only export, tessellation and membership tests need coordinates; the
combinatorial boundary never depends on them. Vertex coordinates are
cached per diagram so that every cell sees the very same floats for a
shared vertex, and arcs are always sampled in the orientation of their
lower site index so that two neighboring cells share their polylines
exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from ..core.exceptions import GeometryError
from ..kernel.linalg import cross, sub
from ..power.triangulation import weighted_circumcenter
from ..power.weighted_point import WeightedPoint
from .cells import Cycle, IntersectionCell, OrientedArc, SphereVertex

TWO_PI = 2.0 * math.pi


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def orthonormal_frame(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(e1, e2) orthogonal to the unit `normal` with e1 × e2 = normal."""
    k = int(np.argmin(np.abs(normal)))
    helper = np.zeros(3)
    helper[k] = 1.0
    e1 = _unit(np.cross(helper, normal))
    e2 = np.cross(normal, e1)
    return e1, e2


@dataclass(frozen=True)
class Circle:
    """Circle ⟨normal, x⟩ = offset on the unit sphere, with a frame of its plane."""

    normal: np.ndarray
    offset: float
    e1: np.ndarray
    e2: np.ndarray

    @property
    def center(self) -> np.ndarray:
        return self.offset * self.normal

    @property
    def radius(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.offset * self.offset))

    def angle(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        return np.arctan2(x @ self.e2, x @ self.e1)

    def point(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        pts = self.center + self.radius * (
            np.cos(theta)[..., None] * self.e1 + np.sin(theta)[..., None] * self.e2
        )
        return _unit(pts)

    def side(self, x: np.ndarray) -> np.ndarray:
        """Signed offset of `x` from the plane; the cell side is <= 0."""
        return np.asarray(x) @ self.normal - self.offset


class DiagramGeometry:
    """Coordinates of the vertices and arcs of one diagram's cells."""

    def __init__(self, sites: Sequence[WeightedPoint]):
        self.sites = list(sites)
        self._vertices: dict[SphereVertex, np.ndarray] = {}
        self._circles: dict[tuple[int, int], Circle] = {}

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([[float(c) for c in p.position] for p in self.sites]).reshape(-1, 3)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array([float(p.weight) for p in self.sites])

    # ---------------- vertices ----------------
    def vertex(self, v: SphereVertex) -> np.ndarray:
        cached = self._vertices.get(v)
        if cached is not None:
            return cached
        if v.point is not None:
            x = _unit(np.array([float(c) for c in v.point]))
        else:
            x = self._ridge_root(v.ridge, v.root)
        self._vertices[v] = x
        return x

    def _ridge_root(self, ridge: tuple[int, ...], root: int) -> np.ndarray:
        a, b, c = (self.sites[k] for k in ridge)
        origin = np.array([float(t) for t in weighted_circumcenter([a, b, c])])
        axis = np.array([float(t) for t in cross(sub(b.position, a.position), sub(c.position, a.position))])
        qa = axis @ axis
        qb = origin @ axis
        qc = origin @ origin - 1.0
        disc = max(qb * qb - qa * qc, 0.0)
        s = (-qb - math.sqrt(disc)) / qa if root == 0 else (-qb + math.sqrt(disc)) / qa
        return _unit(origin + s * axis)

    # ---------------- circles and arcs ----------------
    def circle(self, i: int, j: int) -> Circle:
        """Circle of the radical plane of (i, j), oriented for the cell of i."""
        key = (i, j)
        cached = self._circles.get(key)
        if cached is not None:
            return cached
        si, sj = self.sites[i], self.sites[j]
        n = np.array([float(t) for t in sub(sj.position, si.position)])
        length = float(np.linalg.norm(n))
        if length == 0.0:
            raise GeometryError("coincident sites have no circle", {"sites": [i, j]})
        offset = float((sj.lift - si.lift) / 2) / length
        normal = n / length
        e1, e2 = orthonormal_frame(normal)
        circle = Circle(normal, offset, e1, e2)
        self._circles[key] = circle
        return circle

    def span(self, arc: OrientedArc) -> tuple[Circle, float, float]:
        """(circle, start angle, sweep) of `arc` in its own orientation."""
        circle = self.circle(arc.site, arc.other)
        if arc.is_full_circle:
            return circle, 0.0, TWO_PI
        t0 = float(circle.angle(self.vertex(arc.source)))  # type: ignore[arg-type]
        t1 = float(circle.angle(self.vertex(arc.target)))  # type: ignore[arg-type]
        if arc.zero_length:
            return circle, t0, 0.0
        sweep = (t1 - t0) % TWO_PI
        if sweep < 1e-12:
            sweep = TWO_PI
        return circle, t0, sweep

    def sample_arc(self, arc: OrientedArc, tol: float) -> np.ndarray:
        """
        Points along `arc` with angular steps of at most `tol`, from its
        source to its target (first point repeated at the end for a full
        circle).
        """
        canon = arc.canonical
        circle, t0, sweep = self.span(canon)
        n = max(1, math.ceil(sweep / tol)) if sweep > 0 else 1
        if canon.is_full_circle:
            n = max(n, 8)
        pts = circle.point(t0 + np.linspace(0.0, sweep, n + 1))
        if canon.is_full_circle:
            pts[-1] = pts[0]
        else:
            pts[0] = self.vertex(canon.source)  # type: ignore[arg-type]
            pts[-1] = self.vertex(canon.target)  # type: ignore[arg-type]
        return pts if canon is arc else pts[::-1].copy()

    def ring(self, cycle: Cycle, tol: float) -> np.ndarray:
        """Closed polyline of a cycle without its repeated closing point."""
        parts = [self.sample_arc(a, tol)[:-1] for a in cycle if not a.zero_length]
        if not parts:
            return np.empty((0, 3))
        return np.concatenate(parts, axis=0)


# ---------------- membership ----------------

def _corner(geom: DiagramGeometry, site: int, a_in: OrientedArc, a_out: OrientedArc,
            v: np.ndarray, u: np.ndarray) -> np.ndarray:
    c_in = geom.circle(site, a_in.other)
    c_out = geom.circle(site, a_out.other)
    in_a = c_in.side(u) <= 0
    in_b = c_out.side(u) <= 0
    turn = np.dot(np.cross(np.cross(c_in.normal, v), np.cross(c_out.normal, v)), v)
    if turn < 0:
        return in_a & in_b
    return in_a | in_b


def cell_contains(cell: IntersectionCell, directions: np.ndarray) -> np.ndarray:
    """
    Membership of unit vectors in `cell`, decided against the nearest arc:
    inside its circle's cell side, or, when the nearest point is a vertex,
    inside the corner formed by the two arcs meeting there.
    """
    u = np.atleast_2d(np.asarray(directions, dtype=float))
    if cell.whole_sphere:
        return np.ones(len(u), dtype=bool)
    cycles = [[a for a in c if not a.zero_length] for c in cell.cycles]
    cycles = [c for c in cycles if c]
    if not cycles:
        return np.zeros(len(u), dtype=bool)
    geom = cell.geometry
    if geom is None:
        raise GeometryError("cell has no geometry attached", {"site": cell.site})

    best = np.full(len(u), np.inf)
    inside = np.zeros(len(u), dtype=bool)
    for arcs in cycles:
        m = len(arcs)
        for k, arc in enumerate(arcs):
            circle, t0, sweep = geom.span(arc)
            on_side = circle.side(u) <= 0
            phi = circle.angle(u)
            d_arc = np.linalg.norm(u - circle.point(phi), axis=1)
            if arc.is_full_circle:
                dist, val = d_arc, on_side
            else:
                xs = geom.vertex(arc.source)  # type: ignore[arg-type]
                xt = geom.vertex(arc.target)  # type: ignore[arg-type]
                interior = (phi - t0) % TWO_PI <= sweep
                d_s = np.linalg.norm(u - xs, axis=1)
                d_t = np.linalg.norm(u - xt, axis=1)
                at_source = d_s <= d_t
                corner_s = _corner(geom, cell.site, arcs[(k - 1) % m], arc, xs, u)
                corner_t = _corner(geom, cell.site, arc, arcs[(k + 1) % m], xt, u)
                dist = np.where(interior, d_arc, np.minimum(d_s, d_t))
                val = np.where(interior, on_side, np.where(at_source, corner_s, corner_t))
            better = dist < best
            best[better] = dist[better]
            inside[better] = val[better]
    return inside
