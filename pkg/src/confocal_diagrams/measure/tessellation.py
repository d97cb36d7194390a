"""
Tessellation of intersection cells into spherical triangles.

A cell with arcs is projected stereographically from a pole outside it
(see `sphere.projection`). The planar region is cut into boxes small
enough that a planar triangle maps to a near-geodesic one, each piece is
triangulated by a constrained Delaunay triangulation that respects the
holes, and the triangles are mapped back to the sphere. Neighbouring
pieces get each other's seam vertices first: a lifted straight edge is a
geodesic, so pieces that met at a T-junction would leave a sliver
uncovered. Lifted triangles are split until their edges are short.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np
import shapely
from shapely.geometry import Polygon
from shapely.geometry.base import BaseGeometry

from ..core.logging_config import get_logger
from ..core.settings import settings
from ..sphere.cells import IntersectionCell
from ..sphere.projection import Stereographic, cell_region, polygon_parts
from .quadrature import subdivide, triangle_determinants

logger = get_logger(__name__)

# angular size of the boxes the projected region is cut into
MAX_PIECE_ANGLE = 0.25
_MAX_SPLITS = 24
_MAX_REFINE = 8
# seam matching distance, relative to the size of the projected region
_SEAM_EPS = 1e-9
WHOLE_SPHERE_LEVEL = 3


@dataclass(frozen=True)
class SphericalTessellation:
    """Positively oriented spherical triangles stored as unit-vector triples (T, 3, 3)."""

    triangles: np.ndarray
    max_deviation: float = 0.0

    def __len__(self) -> int:
        return len(self.triangles)

    @property
    def solid_angle(self) -> float:
        """Sum of the spherical triangle areas."""
        if len(self.triangles) == 0:
            return 0.0
        a, b, c = self.triangles[:, 0], self.triangles[:, 1], self.triangles[:, 2]
        num = triangle_determinants(self.triangles)
        den = (1.0 + np.einsum("ti,ti->t", a, b) + np.einsum("ti,ti->t", b, c)
               + np.einsum("ti,ti->t", c, a))
        return float(np.sum(2.0 * np.arctan2(num, den)))

    def clipped(self, axis: np.ndarray) -> "SphericalTessellation":
        """Part of the tessellation in the closed hemisphere {⟨u, axis⟩ >= 0}."""
        return SphericalTessellation(clip_halfspace(self.triangles, axis), self.max_deviation)

    @classmethod
    def empty(cls) -> "SphericalTessellation":
        return cls(np.zeros((0, 3, 3)))


def clip_halfspace(triangles: np.ndarray, axis: np.ndarray) -> np.ndarray:
    """
    Clip spherical triangles by a plane through the origin.

    Clipping the flat carrier triangle and normalizing the new vertices
    gives exactly the clipped spherical triangle, since the plane's trace
    on the sphere is a great circle.
    """
    tris = np.asarray(triangles, dtype=float).reshape(-1, 3, 3)
    axis = np.asarray(axis, dtype=float)
    if len(tris) == 0:
        return tris
    side = tris @ axis
    inside = (side >= 0).all(axis=1)
    mixed = ~inside & (side > 0).any(axis=1)
    out = [tris[inside]]
    for tri, s in zip(tris[mixed], side[mixed]):
        poly = []
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            sa, sb = s[k], s[(k + 1) % 3]
            if sa >= 0:
                poly.append(a)
            if (sa >= 0) != (sb >= 0):
                t = sa / (sa - sb)
                p = a + t * (b - a)
                poly.append(p / np.linalg.norm(p))
        for k in range(1, len(poly) - 1):
            out.append(np.array([[poly[0], poly[k], poly[k + 1]]]))
    return np.concatenate(out) if out else np.zeros((0, 3, 3))


def _normalize(tris: np.ndarray) -> np.ndarray:
    return tris / np.linalg.norm(tris, axis=2, keepdims=True)


def sphere_tessellation(level: int = WHOLE_SPHERE_LEVEL) -> SphericalTessellation:
    """Octahedron subdivided `level` times, vertices pushed onto the sphere."""
    e = np.eye(3)
    tris = []
    for sx in (1.0, -1.0):
        for sy in (1.0, -1.0):
            for sz in (1.0, -1.0):
                a, b, c = sx * e[0], sy * e[1], sz * e[2]
                # orient outward
                tris.append([a, b, c] if sx * sy * sz > 0 else [a, c, b])
    out = np.array(tris)
    for _ in range(level):
        a, b, c = out[:, 0], out[:, 1], out[:, 2]
        ab, bc, ca = (a + b), (b + c), (c + a)
        ab, bc, ca = (v / np.linalg.norm(v, axis=1, keepdims=True) for v in (ab, bc, ca))
        out = np.concatenate([
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ])
    return SphericalTessellation(out)


def _box_scale(x0: float, y0: float, side: float) -> float:
    """Largest stereographic scale factor 2/(1 + r²) over a box."""
    dx = max(x0, 0.0, -(x0 + side))
    dy = max(y0, 0.0, -(y0 + side))
    return 2.0 / (1.0 + dx * dx + dy * dy)


def _pieces(region: BaseGeometry, max_angle: float) -> list[BaseGeometry]:
    """Quadtree cut of a planar region into pieces of bounded angular size."""
    minx, miny, maxx, maxy = region.bounds
    side = max(maxx - minx, maxy - miny) * (1.0 + 1e-9)
    if side <= 0.0:
        return []
    stack = [(region, minx, miny, side, 0)]
    pieces = []
    while stack:
        geom, x0, y0, s, depth = stack.pop()
        if s * math.sqrt(2.0) * _box_scale(x0, y0, s) <= max_angle or depth >= _MAX_SPLITS:
            pieces.append(geom)
            continue
        h = s / 2.0
        for cx, cy in ((x0, y0), (x0 + h, y0), (x0, y0 + h), (x0 + h, y0 + h)):
            child = shapely.intersection(geom, shapely.box(cx, cy, cx + h, cy + h))
            if not child.is_empty and child.area > 0.0:
                stack.append((child, cx, cy, h, depth + 1))
    return pieces


def _seam_points(polys: list[Polygon]) -> np.ndarray:
    return np.unique(np.concatenate([shapely.get_coordinates(p) for p in polys]), axis=0)


def _conform_ring(ring: np.ndarray, points: np.ndarray, tree: shapely.STRtree, eps: float) -> np.ndarray:
    """
    Closed ring with every point of `points` lying inside one of its edges
    inserted there, in order along the edge.
    """
    a, b = ring[:-1], ring[1:]
    edge_idx, pt_idx = tree.query(shapely.linestrings(np.stack([a, b], axis=1)),
                                  predicate="dwithin", distance=eps)
    d = b[edge_idx] - a[edge_idx]
    length = np.linalg.norm(d, axis=1)
    hit = length > 2.0 * eps
    edge_idx, pt_idx, d, length = edge_idx[hit], pt_idx[hit], d[hit], length[hit]
    along = np.einsum("ki,ki->k", points[pt_idx] - a[edge_idx], d) / length
    inner = (along > eps) & (along < length - eps)
    if not inner.any():
        return ring
    inserts: dict[int, list[tuple[float, np.ndarray]]] = defaultdict(list)
    for e, p, s in zip(edge_idx[inner], pt_idx[inner], along[inner]):
        inserts[int(e)].append((float(s), points[p]))
    out = []
    for k in range(len(a)):
        out.append(a[k])
        last = 0.0
        for s, p in sorted(inserts.get(k, ()), key=lambda item: item[0]):
            if s - last > eps:
                out.append(p)
                last = s
    out.append(ring[-1])
    return np.array(out)


def _conforming(pieces: list[BaseGeometry], eps: float) -> list[Polygon]:
    """
    Polygons of the pieces with the vertices of their neighbours inserted
    on shared seams, so that the pieces meet edge to edge.
    """
    polys = [poly for piece in pieces for poly in polygon_parts(piece)]
    if len(polys) < 2:
        return polys
    points = _seam_points(polys)
    tree = shapely.STRtree(shapely.points(points))
    out = []
    for poly in polys:
        shell = _conform_ring(np.asarray(poly.exterior.coords), points, tree, eps)
        holes = [_conform_ring(np.asarray(r.coords), points, tree, eps) for r in poly.interiors]
        out.append(Polygon(shell, holes))
    return out


def _planar_triangles(poly: Polygon) -> np.ndarray:
    cdt = shapely.constrained_delaunay_triangles(poly)
    parts = shapely.get_parts(cdt)
    if len(parts) == 0:
        return np.zeros((0, 3, 2))
    rings = shapely.get_exterior_ring(parts)
    return shapely.get_coordinates(rings).reshape(-1, 4, 2)[:, :3]


def _lift(planar: np.ndarray, proj: Stereographic) -> np.ndarray:
    tris = proj.inverse(planar)
    flip = triangle_determinants(tris) < 0
    tris[flip] = tris[flip][:, ::-1]
    return tris


def refine_geodesic(triangles: np.ndarray, max_angle: float) -> np.ndarray:
    """
    Split spherical triangles at their geodesic edge midpoints until no
    edge spans more than `max_angle`. The children of a split cover their
    parent exactly.
    """
    chord = 2.0 * math.sin(max_angle / 2.0)
    tris = np.asarray(triangles, dtype=float).reshape(-1, 3, 3)
    done = []
    for _ in range(_MAX_REFINE):
        if len(tris) == 0:
            break
        longest = np.linalg.norm(tris - np.roll(tris, 1, axis=1), axis=2).max(axis=1)
        long = longest > chord
        done.append(tris[~long])
        tris = _normalize(subdivide(tris[long]))
    done.append(tris)
    return np.concatenate(done)


def tessellate_cell(
    cell: IntersectionCell,
    arc_tol: Optional[float] = None,
    max_angle: float = MAX_PIECE_ANGLE,
) -> SphericalTessellation:
    """
    Spherical triangles covering a cell.

    Args:
        cell: Intersection cell with geometry attached.
        arc_tol: Angular step of the boundary arcs.
        max_angle: Angular size of the planar pieces triangulated separately,
            and the bound on the geodesic edges of the result.
    """
    tol = settings.arc_tol if arc_tol is None else arc_tol
    if cell.whole_sphere:
        return sphere_tessellation()
    if cell.is_empty:
        return SphericalTessellation.empty()
    region, proj = cell_region(cell, tol)
    if region.is_empty:
        return SphericalTessellation.empty()
    minx, miny, maxx, maxy = region.bounds
    eps = _SEAM_EPS * max(maxx - minx, maxy - miny, 1.0)
    planar = [_planar_triangles(poly) for poly in _conforming(_pieces(region, max_angle), eps)]
    planar = [p for p in planar if len(p)]
    if not planar:
        return SphericalTessellation.empty()
    tris = refine_geodesic(_normalize(_lift(np.concatenate(planar), proj)), max_angle)
    logger.debug("Cell %d tessellated into %d triangles", cell.site, len(tris))
    return SphericalTessellation(tris, max_deviation=tol * tol / 8.0)
