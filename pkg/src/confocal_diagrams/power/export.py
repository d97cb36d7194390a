"""Debug dump of a regular triangulation as JSON."""
from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel

from ..kernel import format_rational
from .triangulation import RegularTriangulation


class SiteRecord(BaseModel):
    id: int
    index: int
    position: list[int | str]
    weight: int | str
    hidden: bool


class TriangulationDump(BaseModel):
    dimension: int
    degenerate: bool
    sites: list[SiteRecord]
    cells: list[list[int]]
    neighbors: list[list[int]]
    dual_vertices: dict[int, list[int | str]]


def dump_triangulation(tri: RegularTriangulation) -> TriangulationDump:
    """Sites, cells (-1 is the vertex at infinity), adjacency and dual vertices."""
    return TriangulationDump(
        dimension=tri.dimension,
        degenerate=tri.degenerate,
        sites=[
            SiteRecord(
                id=k,
                index=s.index,
                position=[format_rational(c) for c in s.position],
                weight=format_rational(s.weight),
                hidden=tri.is_hidden(k),
            )
            for k, s in enumerate(tri.sites)
        ],
        cells=[list(c) for c in tri.cells],
        neighbors=[list(n) for n in tri.neighbors],
        dual_vertices={
            c: [format_rational(x) for x in tri.dual_vertex(c)]
            for c in tri.finite_cells()
            if tri.dimension > 0
        },
    )


def write_triangulation_json(tri: RegularTriangulation, path: Path) -> None:
    path.write_text(dump_triangulation(tri).model_dump_json(indent=2), encoding="utf-8")
