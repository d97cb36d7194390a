"""
Regular triangulation of weighted points by randomized incremental
insertion.

The triangulation lives in the affine hull of the sites (dimension 0 to 3)
and is closed up with a symbolic vertex at infinity: every hull facet
carries an infinite cell, so the cell complex is a triangulated sphere and
every cell has exactly d+1 neighbors. A point is inserted by locating a
cell in conflict with it (stochastic walk), growing the conflict region
through neighbors and starring its boundary from the new point. Sites that
fall out of the lower hull are reported as hidden.

Orientation conventions:
- finite cells are positively oriented;
- an infinite cell becomes positively oriented when its infinite vertex is
  replaced by a point strictly beyond its hull facet.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ..core.exceptions import DegenerateSimplexError, GeometryError
from ..core.logging_config import get_logger
from ..kernel import solve_exact
from ..kernel.linalg import cross, det3, dot, sub
from .predicates import Axes, LiftedPoints
from .weighted_point import WeightedPoint

logger = get_logger(__name__)

INFINITE = -1

Vector3 = tuple[Fraction, Fraction, Fraction]


def _affine_basis(points: Sequence[WeightedPoint]) -> list[int]:
    """Ids of the first affinely independent sites, in input order."""
    base = [0]
    p0 = points[0].position
    for k, p in enumerate(points):
        if len(base) == 1:
            if p.position != p0:
                base.append(k)
        elif len(base) == 2:
            v1 = sub(points[base[1]].position, p0)
            if any(cross(v1, sub(p.position, p0))):
                base.append(k)
        elif len(base) == 3:
            rows = [sub(points[b].position, p0) for b in base[1:]] + [sub(p.position, p0)]
            if det3(rows) != 0:
                base.append(k)
                break
    return base


def _projection_axes(points: Sequence[WeightedPoint], base: list[int]) -> Axes:
    """Coordinate axes on which the affine hull projects bijectively."""
    dim = len(base) - 1
    if dim == 3:
        return (0, 1, 2)
    if dim == 0:
        return ()
    p0 = points[base[0]].position
    v1 = sub(points[base[1]].position, p0)
    if dim == 1:
        drop = max(range(3), key=lambda a: abs(v1[a]))
        return (drop,)
    normal = cross(v1, sub(points[base[2]].position, p0))
    drop = max(range(3), key=lambda a: abs(normal[a]))
    return tuple(a for a in range(3) if a != drop)


class _IncrementalBuilder:
    """Mutable cell complex used while inserting points."""

    def __init__(self, lifted: LiftedPoints, dimension: int, rng: np.random.Generator):
        self.lp = lifted
        self.d = dimension
        self.axes: Axes = tuple(range(dimension))
        self.rng = rng
        self.cells: dict[int, list[int]] = {}
        self.adj: dict[int, list[int]] = {}
        self.hidden: set[int] = set()
        self._next = 0
        self._last_finite = -1
        self.walk_steps = 0
        self.fallback_scans = 0

    # ---------------- cell bookkeeping ----------------
    def _new_cell(self, vertices: list[int]) -> int:
        cid = self._next
        self._next += 1
        self.cells[cid] = vertices
        self.adj[cid] = [-1] * (self.d + 1)
        return cid

    def _link_among(self, cids: Iterable[int]) -> None:
        pending: dict[frozenset, tuple[int, int]] = {}
        for cid in cids:
            verts = self.cells[cid]
            for k in range(self.d + 1):
                if self.adj[cid][k] != -1:
                    continue
                key = frozenset(v for m, v in enumerate(verts) if m != k)
                other = pending.pop(key, None)
                if other is None:
                    pending[key] = (cid, k)
                else:
                    ocid, ok = other
                    self.adj[cid][k] = ocid
                    self.adj[ocid][ok] = cid
        if pending:
            raise GeometryError("unmatched facets while linking cells", {"count": len(pending)})

    def start(self, base: list[int]) -> None:
        verts = list(base)
        if self.lp.orientation(verts, self.axes) < 0:
            verts[0], verts[1] = verts[1], verts[0]
        finite = self._new_cell(verts)
        created = [finite]
        for k in range(self.d + 1):
            inf_verts = list(verts)
            inf_verts[k] = INFINITE
            # odd permutation: the inner side becomes the negative side
            m = (k + 1) % (self.d + 1)
            inf_verts[k], inf_verts[m] = inf_verts[m], inf_verts[k]
            created.append(self._new_cell(inf_verts))
        self._link_among(created)
        self._last_finite = finite

    # ---------------- predicates ----------------
    def is_infinite(self, cid: int) -> bool:
        return INFINITE in self.cells[cid]

    def in_conflict(self, cid: int, q: int) -> bool:
        verts = self.cells[cid]
        if INFINITE not in verts:
            return self.lp.power_side(verts, q, self.axes) < 0
        test = [q if v == INFINITE else v for v in verts]
        o = self.lp.orientation(test, self.axes)
        if o:
            return o > 0
        facet = [v for v in verts if v != INFINITE]
        for sub_axes in combinations(self.axes, self.d - 1):
            if self.lp.orientation(facet, sub_axes) != 0:
                return self.lp.power_side(facet, q, sub_axes) < 0
        raise DegenerateSimplexError("flat hull facet", {"facet": facet})

    # ---------------- location ----------------
    def _walk(self, q: int) -> int | None:
        c = self._last_finite
        limit = 8 * len(self.cells) + 64
        for _ in range(limit):
            self.walk_steps += 1
            verts = self.cells[c]
            start = int(self.rng.integers(self.d + 1))
            moved = False
            for t in range(self.d + 1):
                k = (start + t) % (self.d + 1)
                test = list(verts)
                test[k] = q
                if self.lp.orientation(test, self.axes) < 0:
                    n = self.adj[c][k]
                    if self.is_infinite(n):
                        return n
                    c = n
                    moved = True
                    break
            if not moved:
                return c
        return None

    def locate_conflict(self, q: int) -> int | None:
        """A cell in conflict with q, or None when q is hidden."""
        c = self._walk(q)
        if c is not None and self.in_conflict(c, q):
            return c
        if c is not None and not self.is_infinite(c):
            return None
        # walk did not settle: scan every cell
        self.fallback_scans += 1
        for cid in self.cells:
            if self.in_conflict(cid, q):
                return cid
        return None

    # ---------------- insertion ----------------
    def insert(self, q: int) -> None:
        seed_cell = self.locate_conflict(q)
        if seed_cell is None:
            self.hidden.add(q)
            return

        conflict = {seed_cell}
        clear: set[int] = set()
        stack = [seed_cell]
        boundary: list[tuple[int, int]] = []
        while stack:
            c = stack.pop()
            for k, n in enumerate(self.adj[c]):
                if n in conflict:
                    continue
                if n not in clear:
                    if self.in_conflict(n, q):
                        conflict.add(n)
                        stack.append(n)
                        continue
                    clear.add(n)
                boundary.append((c, k))

        created = []
        kept_vertices: set[int] = set()
        for c, k in boundary:
            verts = list(self.cells[c])
            verts[k] = q
            nid = self._new_cell(verts)
            outside = self.adj[c][k]
            self.adj[nid][k] = outside
            back = self.adj[outside]
            back[back.index(c)] = nid
            created.append(nid)
            kept_vertices.update(verts)
        self._link_among(created)

        removed_vertices: set[int] = set()
        for c in conflict:
            removed_vertices.update(self.cells.pop(c))
            del self.adj[c]
        for v in removed_vertices - kept_vertices - {INFINITE}:
            self.hidden.add(v)

        self._last_finite = next(c for c in created if not self.is_infinite(c))


@dataclass
class RegularTriangulation:
    """
    Regular triangulation with a symbolic vertex at infinity.

    Cells are tuples of d+1 site ids (INFINITE marks the infinite vertex);
    `neighbors[c][k]` is the cell across the facet opposite `cells[c][k]`.
    Immutable after construction.
    """

    sites: list[WeightedPoint]
    dimension: int
    axes: Axes
    cells: list[tuple[int, ...]]
    neighbors: list[tuple[int, ...]]
    hidden: frozenset[int]
    degenerate: bool = False
    lifted: LiftedPoints | None = field(default=None, repr=False)
    _star: dict[int, tuple[int, ...]] = field(default_factory=dict, repr=False)
    _dual: dict[int, Vector3] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        star: dict[int, list[int]] = {}
        for cid, verts in enumerate(self.cells):
            for v in verts:
                if v != INFINITE:
                    star.setdefault(v, []).append(cid)
        self._star = {v: tuple(cs) for v, cs in star.items()}
        if self.dimension == 0:
            return
        for cid in self.finite_cells():
            self._dual[cid] = self._weighted_circumcenter(self.cells[cid])

    # ---------------- queries ----------------
    @property
    def size(self) -> int:
        return len(self.sites)

    def vertices(self) -> list[int]:
        """Ids of the sites that are not hidden."""
        return [v for v in range(len(self.sites)) if v not in self.hidden]

    def is_hidden(self, site: int) -> bool:
        return site in self.hidden

    def is_infinite(self, cid: int) -> bool:
        return INFINITE in self.cells[cid]

    def finite_cells(self) -> list[int]:
        return [c for c, verts in enumerate(self.cells) if INFINITE not in verts]

    def star(self, site: int) -> tuple[int, ...]:
        """Cells incident to `site`."""
        return self._star.get(site, ())

    def dual_vertex(self, cid: int) -> Vector3:
        """Weighted circumcenter of the finite cell `cid`."""
        try:
            return self._dual[cid]
        except KeyError:
            raise GeometryError("infinite cell has no dual vertex", {"cell": cid}) from None

    def _weighted_circumcenter(self, verts: Sequence[int]) -> Vector3:
        return weighted_circumcenter([self.sites[v] for v in verts])

    def summary(self) -> dict[str, int | bool]:
        finite = len(self.finite_cells())
        return {
            "dimension": self.dimension,
            "sites": len(self.sites),
            "hidden": len(self.hidden),
            "finite_cells": finite,
            "infinite_cells": len(self.cells) - finite,
            "degenerate": self.degenerate,
        }


def weighted_circumcenter(sites: Sequence[WeightedPoint]) -> Vector3:
    """
    Point of equal power to 2, 3 or 4 affinely independent sites lying in
    their affine hull.

    Raises:
        DegenerateSimplexError: If the sites are affinely dependent.
    """
    p0 = sites[0].position
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for s in sites[1:]:
        rows.append([2 * c for c in sub(s.position, p0)])
        rhs.append(s.lift - sites[0].lift)
    edges = [sub(s.position, p0) for s in sites[1:]]
    if len(sites) == 3:
        normal = cross(edges[0], edges[1])
        rows.append(list(normal))
        rhs.append(dot(normal, p0))
    elif len(sites) == 2:
        e = edges[0]
        # two independent normals of the edge
        axis = min(range(3), key=lambda a: abs(e[a]))
        unit = tuple(Fraction(int(a == axis)) for a in range(3))
        n1 = cross(e, unit)
        n2 = cross(e, n1)
        for n in (n1, n2):
            rows.append(list(n))
            rhs.append(dot(n, p0))
    solution = solve_exact(rows, rhs)
    if solution is None or solution.null_basis:
        raise DegenerateSimplexError("flat simplex has no weighted circumcenter",
                                     {"indices": [s.index for s in sites]})
    return solution.particular  # type: ignore[return-value]


def dual_vertex(sites: Sequence[WeightedPoint]) -> Vector3:
    """Weighted circumcenter of a tetrahedron of four weighted points."""
    if len(sites) != 4:
        raise ValueError("dual_vertex needs exactly 4 sites")
    return weighted_circumcenter(sites)


def build_triangulation(points: Sequence[WeightedPoint], seed: int = 0) -> RegularTriangulation:
    """
    Build the regular triangulation of `points`.

    Args:
        points: Weighted points; internal ids are list positions.
        seed: Seed of the insertion-order shuffle and of the walk.

    Returns:
        The triangulation, with hidden sites reported.
    """
    if not points:
        raise GeometryError("cannot triangulate an empty point set")
    labels = [p.index for p in points]
    if len(set(labels)) != len(labels):
        raise GeometryError("site indices must be unique", {"count": len(labels)})

    sites = list(points)
    base = _affine_basis(sites)
    dim = len(base) - 1
    axes = _projection_axes(sites, base)

    if dim == 0:
        # all positions coincide: the lowest weight wins, ties to the lowest id
        winner = min(range(len(sites)), key=lambda k: (sites[k].weight, k))
        hidden = frozenset(k for k in range(len(sites)) if k != winner)
        logger.info("All %d sites share one position; site %d survives", len(sites), winner)
        return RegularTriangulation(sites, 0, (), [(winner,)], [()], hidden, degenerate=True)

    coords = [tuple(p.position[a] for a in axes) for p in sites]
    lifted = LiftedPoints.build(coords, [p.lift for p in sites])
    rng = np.random.default_rng(seed)

    builder = _IncrementalBuilder(lifted, dim, rng)
    builder.start(base)
    rest = [k for k in range(len(sites)) if k not in set(base)]
    order = [rest[k] for k in rng.permutation(len(rest))]
    for q in order:
        builder.insert(q)

    # deterministic renumbering: sort cells by their vertex tuples
    alive = sorted(builder.cells, key=lambda c: tuple(builder.cells[c]))
    renumber = {old: new for new, old in enumerate(alive)}
    cells = [tuple(builder.cells[c]) for c in alive]
    neighbors = [tuple(renumber[n] for n in builder.adj[c]) for c in alive]

    tri = RegularTriangulation(
        sites=sites,
        dimension=dim,
        axes=axes,
        cells=cells,
        neighbors=neighbors,
        hidden=frozenset(builder.hidden),
        lifted=lifted,
    )
    logger.info(
        "Triangulated %d sites in dimension %d: %d cells, %d hidden, %d walk steps, %d scans",
        len(sites), dim, len(cells), len(builder.hidden), builder.walk_steps, builder.fallback_scans,
    )
    return tri
