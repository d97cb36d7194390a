"""
Facets and ridges of power cells.

A facet of the cell of site i is the part of the radical plane of (i, j)
bounding both cells. Its boundary is returned as a cyclic sequence of
ridges traversed positively about n = p_j − p_i, so that walking along the
boundary with n pointing at the viewer keeps the facet on the left.
Unbounded facets start with the ridge coming in from infinity and end
with the ridge leaving to infinity.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from ..core.exceptions import CoincidentSitesError, GeometryError
from ..kernel.linalg import add, cross, dot, norm2, scale, sub
from .triangulation import INFINITE, RegularTriangulation
from .weighted_point import WeightedPoint

Vector3 = tuple[Fraction, Fraction, Fraction]


class RidgeKind(str, Enum):
    """Support of a ridge, with its traversal parameter range."""

    SEGMENT = "segment"    # s in [0, 1]
    RAY_OUT = "ray_out"    # s in [0, +inf), leaves to infinity
    RAY_IN = "ray_in"      # s in (-inf, 0], arrives from infinity
    LINE = "line"          # s in (-inf, +inf)


@dataclass(frozen=True)
class Ridge:
    """
    A ridge of facet (i, j) shared with the third site k.

    Points of the ridge are origin + s·direction for s in the range of
    `kind`; `direction` is the traversal direction. `axis` is
    (p_b − p_a) × (p_c − p_a) for the sorted triple a < b < c and fixes the
    canonical order of the two points where the ridge line meets a sphere.
    """

    sites: tuple[int, int, int]
    kind: RidgeKind
    origin: Vector3
    direction: Vector3
    axis: Vector3

    @property
    def key(self) -> tuple[int, int, int]:
        return tuple(sorted(self.sites))  # type: ignore[return-value]

    @property
    def end(self) -> Vector3 | None:
        """Second endpoint of a segment."""
        if self.kind is RidgeKind.SEGMENT:
            return add(self.origin, self.direction)  # type: ignore[return-value]
        return None

    def finite_endpoints(self) -> list[Vector3]:
        if self.kind is RidgeKind.SEGMENT:
            return [self.origin, self.end]  # type: ignore[list-item]
        if self.kind in (RidgeKind.RAY_OUT, RidgeKind.RAY_IN):
            return [self.origin]
        return []

    @property
    def is_degenerate(self) -> bool:
        """Zero-length segment."""
        return self.kind is RidgeKind.SEGMENT and not any(self.direction)


@dataclass(frozen=True)
class Facet:
    """Facet of the cell of site i on the radical plane ⟨n, x⟩ = h with j."""

    i: int
    j: int
    normal: Vector3
    offset: Fraction
    ridges: tuple[Ridge, ...]
    bounded: bool

    @property
    def is_degenerate(self) -> bool:
        """True when every ridge collapses to a point (zero-area facet)."""
        return bool(self.ridges) and all(r.is_degenerate for r in self.ridges)


@dataclass(frozen=True)
class CellFacets:
    """Facets of one power cell; hidden sites have none."""

    site: int
    hidden: bool
    facets: tuple[Facet, ...]

    def __iter__(self):
        return iter(self.facets)

    def __len__(self) -> int:
        return len(self.facets)


def radical_plane(a: WeightedPoint, b: WeightedPoint) -> tuple[Vector3, Fraction]:
    """
    Radical plane ⟨n, x⟩ = h of two weighted points, with n = p_b − p_a.
    The side ⟨n, x⟩ <= h is the side of `a`.

    Raises:
        CoincidentSitesError: If the two positions coincide.
    """
    n = sub(b.position, a.position)
    if not any(n):
        raise CoincidentSitesError("coincident positions have no radical plane",
                                   {"sites": [a.index, b.index]})
    h = (norm2(b.position) - norm2(a.position) + b.weight - a.weight) / 2
    return n, h  # type: ignore[return-value]


def _ridge_axis(sites: Sequence[WeightedPoint], triple: Sequence[int]) -> Vector3:
    a, b, c = sorted(triple)
    pa = sites[a].position
    return cross(sub(sites[b].position, pa), sub(sites[c].position, pa))  # type: ignore[return-value]


def _even_pair(cell: Sequence[int], i: int, j: int) -> tuple[int, int]:
    """The other two vertices (a, b) with (i, j, a, b) an even permutation of `cell`."""
    pi, pj = cell.index(i), cell.index(j)
    rest = [m for m in range(4) if m not in (pi, pj)]
    perm = [pi, pj, *rest]
    inversions = sum(1 for x in range(4) for y in range(x + 1, 4) if perm[x] > perm[y])
    a, b = cell[rest[0]], cell[rest[1]]
    if inversions % 2:
        a, b = b, a
    return a, b


def _outward_direction(sites: Sequence[WeightedPoint], tri: tuple[int, int, int], inner: int) -> Vector3:
    """Direction of the ridge of a hull triangle, pointing away from `inner`."""
    axis = _ridge_axis(sites, tri)
    if dot(axis, sub(sites[inner].position, sites[tri[0]].position)) > 0:
        axis = scale(-1, axis)
    return axis  # type: ignore[return-value]


def _ring(tri: RegularTriangulation, i: int, j: int, start: int) -> list[tuple[int, int]]:
    """Cells around edge (i, j), positively about p_j − p_i, with their `b` vertex."""
    ring = []
    c = start
    while True:
        verts = tri.cells[c]
        a, b = _even_pair(verts, i, j)
        ring.append((c, b))
        c = tri.neighbors[c][verts.index(a)]
        if c == start:
            return ring
        if len(ring) > len(tri.cells):
            raise GeometryError("edge ring does not close", {"edge": (i, j)})


def _facet_3d(tri: RegularTriangulation, i: int, j: int, start: int) -> Facet:
    sites = tri.sites
    ring = _ring(tri, i, j, start)
    m = len(ring)
    # rotate so that an unbounded facet starts right after its infinite pair
    inf_pos = [s for s, (c, _) in enumerate(ring) if tri.is_infinite(c)]
    bounded = not inf_pos
    if not bounded:
        for s in inf_pos:
            if tri.is_infinite(ring[(s + 1) % m][0]):
                ring = ring[s + 1:] + ring[:s + 1]
                break
    ridges: list[Ridge] = []
    for s in range(m if bounded else m - 1):
        c0, k = ring[s]
        c1, _ = ring[(s + 1) % m]
        triple = (i, j, k)
        axis = _ridge_axis(sites, triple)
        inf0, inf1 = tri.is_infinite(c0), tri.is_infinite(c1)
        if not inf0 and not inf1:
            x0, x1 = tri.dual_vertex(c0), tri.dual_vertex(c1)
            ridges.append(Ridge(triple, RidgeKind.SEGMENT, x0, sub(x1, x0), axis))  # type: ignore[arg-type]
        elif not inf0:
            inner = next(v for v in tri.cells[c0] if v not in triple)
            out = _outward_direction(sites, triple, inner)
            ridges.append(Ridge(triple, RidgeKind.RAY_OUT, tri.dual_vertex(c0), out, axis))
        elif not inf1:
            inner = next(v for v in tri.cells[c1] if v not in triple)
            out = _outward_direction(sites, triple, inner)
            ridges.append(Ridge(triple, RidgeKind.RAY_IN, tri.dual_vertex(c1), scale(-1, out), axis))  # type: ignore[arg-type]
    n, h = radical_plane(sites[i], sites[j])
    return Facet(i, j, n, h, tuple(ridges), bounded)


def _facet_2d(tri: RegularTriangulation, i: int, j: int, cells: Sequence[int]) -> Facet:
    sites = tri.sites
    n, h = radical_plane(sites[i], sites[j])
    pi = sites[i].position
    e = n
    ridges: list[Ridge] = []
    for c in cells:
        if tri.is_infinite(c):
            continue
        k = next(v for v in tri.cells[c] if v not in (i, j))
        triple = (i, j, k)
        axis = _ridge_axis(sites, triple)
        center = tri.dual_vertex(c)
        v = sub(sites[k].position, pi)
        perp = sub(v, scale(dot(v, e) / norm2(e), e))
        inward = scale(-1, perp)
        t = axis if dot(cross(n, axis), inward) > 0 else scale(-1, axis)
        ridges.append(Ridge(triple, RidgeKind.LINE, center, t, axis))  # type: ignore[arg-type]
    return Facet(i, j, n, h, tuple(ridges), False)


def facets_of_cell(tri: RegularTriangulation, site: int) -> CellFacets:
    """
    Facets of the power cell of `site`, each with its ridge cycle.

    Hidden sites yield an empty result flagged as hidden.
    """
    if tri.is_hidden(site):
        return CellFacets(site, True, ())
    star = tri.star(site)
    facets: list[Facet] = []
    if tri.dimension == 3:
        first_cell: dict[int, int] = {}
        for c in star:
            for v in tri.cells[c]:
                if v != site and v != INFINITE and v not in first_cell:
                    first_cell[v] = c
        for j in sorted(first_cell):
            facets.append(_facet_3d(tri, site, j, first_cell[j]))
    elif tri.dimension == 2:
        by_neighbor: dict[int, list[int]] = {}
        for c in star:
            for v in tri.cells[c]:
                if v != site and v != INFINITE:
                    by_neighbor.setdefault(v, []).append(c)
        for j in sorted(by_neighbor):
            facets.append(_facet_2d(tri, site, j, by_neighbor[j]))
    elif tri.dimension == 1:
        for c in star:
            if tri.is_infinite(c):
                continue
            j = next(v for v in tri.cells[c] if v != site)
            n, h = radical_plane(tri.sites[site], tri.sites[j])
            facets.append(Facet(site, j, n, h, (), False))
        facets.sort(key=lambda f: f.j)
    return CellFacets(site, False, tuple(facets))

