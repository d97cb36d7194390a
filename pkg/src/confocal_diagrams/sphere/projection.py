"""
Planar pictures of intersection cells.

A cell is projected stereographically from a pole lying outside it, so
its image is a bounded planar region: the points enclosed by an odd
number of projected cycles. Shapely then does the planar bookkeeping.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import shapely
from shapely.geometry import Polygon
from shapely.geometry.base import BaseGeometry

from ..core.exceptions import GeometryError
from .cells import IntersectionCell
from .geometry import orthonormal_frame


@dataclass(frozen=True)
class Stereographic:
    """Projection from `pole` onto the plane through the origin orthogonal to it."""

    pole: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def from_pole(cls, pole: np.ndarray) -> "Stereographic":
        pole = np.asarray(pole, dtype=float)
        pole = pole / np.linalg.norm(pole)
        e1, e2 = orthonormal_frame(pole)
        return cls(pole, e1, e2)

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        denom = 1.0 - x @ self.pole
        return np.stack([x @ self.e1, x @ self.e2], axis=1) / denom[:, None]

    def inverse(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        r2 = (p * p).sum(axis=-1)
        x = (2.0 * p[..., :1] * self.e1 + 2.0 * p[..., 1:2] * self.e2
             + (r2 - 1.0)[..., None] * self.pole)
        return x / (r2 + 1.0)[..., None]


def outside_pole(cell: IntersectionCell) -> np.ndarray:
    """
    Center of the largest cap cut off by one of the cell's boundary
    circles; it lies strictly outside the cell.
    """
    best = None
    for arc in cell.arcs(include_zero_length=False):
        n, h = cell.planes[arc.other]
        nf = np.array([float(c) for c in n])
        length = float(np.linalg.norm(nf))
        depth = float(h) / length
        if best is None or depth < best[0]:
            best = (depth, nf / length)
    if best is None:
        raise GeometryError("cell has no boundary to project", {"site": cell.site})
    return best[1]


def _polygon(points: np.ndarray) -> BaseGeometry:
    poly = Polygon(points)
    if not poly.is_valid:
        poly = poly.buffer(0)
    return poly


def cell_region(cell: IntersectionCell, tol: float) -> tuple[BaseGeometry, Stereographic]:
    """
    Planar region of a cell with arcs, and the projection that produced it.

    Args:
        cell: Cell with at least one arc of positive length.
        tol: Angular sampling step of the arcs.
    """
    geom = cell.geometry
    if geom is None:
        raise GeometryError("cell has no geometry attached", {"site": cell.site})
    proj = Stereographic.from_pole(outside_pole(cell))
    polys = []
    for cycle in cell.cycles:
        if cycle.zero_length:
            continue
        ring = geom.ring(cycle, tol)
        if len(ring) >= 3:
            polys.append(_polygon(proj.forward(ring)))
    if not polys:
        return Polygon(), proj
    return reduce(shapely.symmetric_difference, polys), proj


def polygon_parts(region: BaseGeometry) -> list[Polygon]:
    return [g for g in shapely.get_parts(region) if isinstance(g, Polygon) and g.area > 0.0]


def component_count(cell: IntersectionCell, tol: float = 0.01) -> int:
    """Number of connected components of a cell."""
    if cell.whole_sphere:
        return 1
    if cell.is_empty:
        return 0
    region, _ = cell_region(cell, tol)
    return len(polygon_parts(region))
