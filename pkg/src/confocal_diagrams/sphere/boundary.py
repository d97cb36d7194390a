"""
Oriented boundary of one intersection cell.

Facets of the power cell are visited one by one. A facet contributes
arcs only when its plane cuts the sphere and it is not entirely inside
the ball; its ridges are walked in boundary order and every crossing
with the sphere is classified as a source (boundary leaves the ball) or
a target (boundary enters it). Each source is matched with the next
target along the same walk. A facet whose boundary never meets the
sphere contributes the full circle when the circle center lies in it.
Arcs are then chained into cycles through their shared vertices.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..core.exceptions import GeometryError
from ..core.logging_config import get_logger
from ..power.facets import Facet, facets_of_cell
from ..power.triangulation import RegularTriangulation
from .cells import Cycle, IntersectionCell, OrientedArc, SphereVertex
from .geometry import DiagramGeometry
from .predicates import (
    SECANT,
    Crossing,
    circle_center_in_facet,
    has_on,
    plane_crossing_sphere,
    ridge_crossings,
    tangent_loop_collapses,
)

logger = get_logger(__name__)

_AXIS_POINTS = tuple(
    tuple(Fraction(sign * int(a == k)) for a in range(3)) for k in range(3) for sign in (1, -1)
)


def _vertex(c: Crossing) -> SphereVertex:
    if c.pinned is not None:
        return SphereVertex.at(c.pinned)
    return SphereVertex(c.sites, c.root)


def _collapses(facet: Facet, src: Crossing, tgt: Crossing) -> bool:
    if src.pinned is not None and src.pinned == tgt.pinned:
        return True
    if src.tangent and tgt.tangent and src.ridge is tgt.ridge:
        return tangent_loop_collapses(facet, src.ridge)
    return False


def facet_arcs(facet: Facet) -> list[OrientedArc]:
    """Arcs contributed by one facet to the boundary of the cell of `facet.i`."""
    if facet.is_degenerate:
        return []
    crossing = plane_crossing_sphere(facet)
    if crossing == 0:
        return []
    tangent_plane = crossing != SECANT
    if facet.bounded and all(
        has_on(x) <= 0 for r in facet.ridges for x in r.finite_endpoints()
    ):
        return []

    events = [c for r in facet.ridges for c in ridge_crossings(r)]
    if not events:
        if circle_center_in_facet(facet):
            return [OrientedArc(facet.i, facet.j, zero_length=tangent_plane)]
        return []

    arcs: list[OrientedArc] = []
    m = len(events)
    for k, src in enumerate(events):
        if not src.source:
            continue
        tgt = next((events[(k + s) % m] for s in range(1, m + 1) if not events[(k + s) % m].source), None)
        if tgt is None:
            raise GeometryError("facet boundary has a source without target",
                                {"facet": (facet.i, facet.j)})
        zero = tangent_plane or _collapses(facet, src, tgt)
        arcs.append(OrientedArc(facet.i, facet.j, _vertex(src), _vertex(tgt), zero))
    return arcs


def chain_cycles(arcs: Sequence[OrientedArc]) -> list[Cycle]:
    """
    Group arcs into cycles by following target → source.

    Raises:
        GeometryError: If some arc has no successor.
    """
    cycles = [Cycle((a,)) for a in arcs if a.is_full_circle]
    pending = [a for a in arcs if not a.is_full_circle]
    by_source: dict[SphereVertex, list[int]] = {}
    for k, a in enumerate(pending):
        by_source.setdefault(a.source, []).append(k)  # type: ignore[arg-type]

    used = [False] * len(pending)
    for start in range(len(pending)):
        if used[start]:
            continue
        chain = []
        k = start
        while True:
            used[k] = True
            chain.append(pending[k])
            if pending[k].target == pending[start].source:
                break
            nxt = next((n for n in by_source.get(pending[k].target, ()) if not used[n]), None)  # type: ignore[arg-type]
            if nxt is None:
                raise GeometryError("cell boundary does not close",
                                    {"site": pending[start].site, "at": str(pending[k].target)})
            k = nxt
        cycles.append(Cycle(tuple(chain)))
    return cycles


def axis_powers(tri: RegularTriangulation) -> np.ndarray:
    """Float powers of every site at ±e_x, ±e_y, ±e_z, shape (N, 6)."""
    sites = np.array([p.as_floats() for p in tri.sites])
    pos, w = sites[:, :3], sites[:, 3]
    lift = (pos * pos).sum(axis=1) + w
    axes = np.array(_AXIS_POINTS, dtype=float)
    return 1.0 - 2.0 * pos @ axes.T + lift[:, None]


def covers_sphere(tri: RegularTriangulation, site: int, powers: np.ndarray | None = None) -> bool:
    """
    Whether a site whose cell boundary misses the sphere owns all of it:
    some axis point has strictly the least power with respect to `site`.
    """
    rivals = [j for j in tri.vertices() if j != site]
    if not rivals:
        return True
    if powers is None:
        powers = axis_powers(tri)
    others = powers[rivals].min(axis=0)
    gap = powers[site] - others
    scale = 1e-9 * (1.0 + np.abs(powers[site]))
    me = tri.sites[site]
    for k, e in enumerate(_AXIS_POINTS):
        if gap[k] < -scale[k]:
            return True
        if gap[k] > scale[k]:
            continue
        mine = me.power(e)
        if all(mine < tri.sites[j].power(e) for j in rivals):
            return True
    return False


def build_cell_boundary(
    site: int,
    tri: RegularTriangulation,
    *,
    powers: np.ndarray | None = None,
    geometry: DiagramGeometry | None = None,
) -> IntersectionCell:
    """
    Oriented boundary of the intersection of the sphere with the power cell
    of `site` (internal id).

    Args:
        site: Site id in `tri.sites`.
        tri: Regular triangulation of all sites.
        powers: Cached `axis_powers(tri)` for the whole-sphere test.
        geometry: Shared float geometry attached to the cell.
    """
    if geometry is None:
        geometry = DiagramGeometry(tri.sites)
    if tri.is_hidden(site):
        return IntersectionCell(site, hidden=True, geometry=geometry)
    facets = facets_of_cell(tri, site)
    planes = {f.j: (f.normal, f.offset) for f in facets}
    arcs = [a for f in facets for a in facet_arcs(f)]
    cycles = tuple(chain_cycles(arcs))
    whole = False
    if all(c.zero_length for c in cycles):
        whole = covers_sphere(tri, site, powers)
    logger.debug("Cell %d: %d facets, %d arcs, %d cycles", site, len(facets), len(arcs), len(cycles))
    return IntersectionCell(site, cycles, False, whole, planes, geometry)
