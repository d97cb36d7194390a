"""
Intersection diagrams: every power cell cut with the unit sphere.

The regular triangulation is built once and shared read-only; cell
boundaries are then extracted independently on a thread pool and merged
in site order.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from ..core.logging_config import get_logger
from ..core.settings import settings
from ..power.triangulation import RegularTriangulation, build_triangulation
from ..power.weighted_point import WeightedPoint
from ..quadrics.reductions import quadrics_to_points
from ..quadrics.types import DiagramKind, Quadric
from ..utils.timeit import timed
from .boundary import axis_powers, build_cell_boundary
from .cells import IntersectionCell, OrientedArc, SphereVertex
from .geometry import DiagramGeometry
from .projection import component_count

logger = get_logger(__name__)


@dataclass
class IntersectionDiagram:
    """
    All intersection cells of a set of weighted points, indexed like the
    input list.

    Counts follow the arcs that are kept: zero-length arcs only count when
    `keep_zero_length` is set.
    """

    sites: list[WeightedPoint]
    cells: list[IntersectionCell]
    triangulation: RegularTriangulation = field(repr=False)
    geometry: DiagramGeometry = field(repr=False)
    keep_zero_length: bool = False
    components: list[int] = field(default_factory=list)
    kind: DiagramKind | None = None

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[IntersectionCell]:
        return iter(self.cells)

    def __getitem__(self, site: int) -> IntersectionCell:
        return self.cells[site]

    def arcs(self) -> list[OrientedArc]:
        return [a for c in self.cells for a in c.arcs(self.keep_zero_length)]

    @cached_property
    def edge_index(self) -> dict[tuple, list[OrientedArc]]:
        """Both orientations of every arc, grouped by their unordered key."""
        index: dict[tuple, list[OrientedArc]] = {}
        for arc in self.arcs():
            index.setdefault(arc.key, []).append(arc)
        return index

    def twin(self, arc: OrientedArc) -> OrientedArc | None:
        """The same arc in the boundary of the neighboring cell."""
        for other in self.edge_index.get(arc.key, ()):
            if other.site == arc.other:
                return other
        return None

    @cached_property
    def vertices(self) -> set[SphereVertex]:
        out: set[SphereVertex] = set()
        for c in self.cells:
            out |= c.vertices(self.keep_zero_length)
        return out

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edge_index)

    @property
    def face_count(self) -> int:
        return sum(1 for c in self.cells if not c.is_empty)

    def counts(self) -> dict[str, int]:
        return {"V": self.vertex_count, "E": self.edge_count, "F": self.face_count}

    def hidden_sites(self) -> list[int]:
        return sorted(self.triangulation.hidden)

    def structure(self) -> tuple:
        """
        Canonical combinatorial description: per cell, its cycles as
        rotation-normalized tuples of (neighbor, source, target) names.
        Two diagrams with equal structures are combinatorially identical.
        """
        out = []
        for cell in self.cells:
            cycles = []
            for cycle in cell.cycles:
                names = [(a.other, str(a.source), str(a.target), a.zero_length) for a in cycle]
                k = names.index(min(names))
                cycles.append(tuple(names[k:] + names[:k]))
            out.append((cell.hidden, cell.whole_sphere, tuple(sorted(cycles))))
        return tuple(out)

    def summary(self) -> dict[str, object]:
        tri = self.triangulation.summary()
        return {
            "N": len(self.sites),
            **self.counts(),
            "components": list(self.components),
            "hidden": len(self.triangulation.hidden),
            "finite_cells": tri["finite_cells"],
            "dimension": tri["dimension"],
        }


def build_diagram(
    points: Sequence[WeightedPoint],
    *,
    seed: int | None = None,
    threads: int | None = None,
    keep_zero_length: bool | None = None,
    with_components: bool = True,
    kind: DiagramKind | None = None,
) -> IntersectionDiagram:
    """
    Intersection diagram of weighted points with the unit sphere.

    Args:
        points: Sites; cells come back in the same order.
        seed: Insertion-order seed of the triangulation.
        threads: Worker threads for the per-cell extraction.
        keep_zero_length: Count zero-length arcs (tangential contacts).
        with_components: Also count connected components per cell.
        kind: Diagram kind recorded for export.
    """
    seed = settings.seed if seed is None else seed
    threads = settings.threads if threads is None else threads
    keep = settings.keep_zero_length_arcs if keep_zero_length is None else keep_zero_length

    with timed("regular triangulation"):
        tri = build_triangulation(points, seed=seed)
    geometry = DiagramGeometry(tri.sites)
    powers = axis_powers(tri)

    def extract(site: int) -> IntersectionCell:
        return build_cell_boundary(site, tri, powers=powers, geometry=geometry)

    with timed("cell boundaries"):
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = list(pool.map(extract, range(len(tri.sites))))

    components: list[int] = []
    if with_components:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            components = list(pool.map(component_count, cells))

    diagram = IntersectionDiagram(tri.sites, cells, tri, geometry, keep, components, kind)
    logger.info("Intersection diagram of %d sites: V=%d E=%d F=%d",
                len(cells), diagram.vertex_count, diagram.edge_count, diagram.face_count)
    return diagram


def diagram_of_quadrics(
    quadrics: Sequence[Quadric], kind: DiagramKind | str, **kwargs
) -> IntersectionDiagram:
    """Diagram of the lower (intersection kinds) or upper (union kinds) envelope."""
    kind = DiagramKind.parse(kind)
    points = quadrics_to_points(quadrics, kind)
    return build_diagram(points, kind=kind, **kwargs)
