"""Diagram export: JSON document and SVG drawing of both hemispheres."""
from __future__ import annotations

from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from pydantic import BaseModel  # noqa: E402

from ..core.logging_config import get_logger  # noqa: E402
from ..core.settings import settings  # noqa: E402
from .cells import OrientedArc, SphereVertex  # noqa: E402
from .diagram import IntersectionDiagram  # noqa: E402

logger = get_logger(__name__)


class VertexRecord(BaseModel):
    key: str
    ridge: list[int]
    root: int
    point: list[float]


class ArcRecord(BaseModel):
    sites: list[int]
    source: Optional[str] = None
    target: Optional[str] = None
    full_circle: bool = False
    zero_length: bool = False


class CycleRecord(BaseModel):
    arcs: list[ArcRecord]


class CellRecord(BaseModel):
    site: int
    index: int
    hidden: bool
    whole_sphere: bool
    empty: bool
    components: Optional[int] = None
    cycles: list[CycleRecord]


class DiagramCounts(BaseModel):
    V: int
    E: int
    F: int
    components: list[int]


class DiagramDocument(BaseModel):
    kind: Optional[str] = None
    sites: int
    counts: DiagramCounts
    triangulation: dict[str, int | bool]
    vertices: list[VertexRecord]
    cells: list[CellRecord]


def _arc_record(arc: OrientedArc) -> ArcRecord:
    return ArcRecord(
        sites=[arc.site, arc.other],
        source=None if arc.source is None else str(arc.source),
        target=None if arc.target is None else str(arc.target),
        full_circle=arc.is_full_circle,
        zero_length=arc.zero_length,
    )


def _vertex_record(diagram: IntersectionDiagram, v: SphereVertex) -> VertexRecord:
    x = diagram.geometry.vertex(v)
    return VertexRecord(key=str(v), ridge=list(v.ridge), root=v.root, point=[float(c) for c in x])


def diagram_document(diagram: IntersectionDiagram) -> DiagramDocument:
    """Cells → cycles → arcs, vertex coordinates and global counts."""
    keep = diagram.keep_zero_length
    cells = []
    for k, cell in enumerate(diagram.cells):
        cycles = []
        for cycle in cell.cycles:
            arcs = [_arc_record(a) for a in cycle if keep or not a.zero_length]
            if arcs:
                cycles.append(CycleRecord(arcs=arcs))
        cells.append(CellRecord(
            site=k,
            index=diagram.sites[k].index,
            hidden=cell.hidden,
            whole_sphere=cell.whole_sphere,
            empty=cell.is_empty,
            components=diagram.components[k] if diagram.components else None,
            cycles=cycles,
        ))
    vertices = sorted(diagram.vertices, key=str)
    return DiagramDocument(
        kind=None if diagram.kind is None else diagram.kind.value,
        sites=len(diagram.sites),
        counts=DiagramCounts(**diagram.counts(), components=list(diagram.components)),
        triangulation=diagram.triangulation.summary(),
        vertices=[_vertex_record(diagram, v) for v in vertices],
        cells=cells,
    )


def write_diagram_json(diagram: IntersectionDiagram, path: Path) -> None:
    path.write_text(diagram_document(diagram).model_dump_json(indent=2), encoding="utf-8")
    logger.info("Wrote diagram JSON to %s", path)


def _lambert(points: np.ndarray, north: bool) -> np.ndarray:
    """Lambert azimuthal equal-area projection centered on a pole, viewed from outside."""
    x, y, z = points[:, 0], points[:, 1], points[:, 2]
    if north:
        k = np.sqrt(2.0 / np.maximum(1.0 + z, 1e-12))
        return np.stack([k * x, k * y], axis=1)
    k = np.sqrt(2.0 / np.maximum(1.0 - z, 1e-12))
    return np.stack([-k * x, k * y], axis=1)


def _runs(points: np.ndarray, north: bool) -> list[np.ndarray]:
    """Maximal runs of a polyline lying in one closed hemisphere."""
    mask = points[:, 2] >= 0 if north else points[:, 2] <= 0
    runs, start = [], None
    for k, m in enumerate(mask):
        if m and start is None:
            start = k
        elif not m and start is not None:
            runs.append(points[start:k])
            start = None
    if start is not None:
        runs.append(points[start:])
    return [r for r in runs if len(r) >= 2]


def write_diagram_svg(diagram: IntersectionDiagram, path: Path, arc_tol: float | None = None) -> None:
    """Draw every arc once on two equal-area hemisphere views."""
    tol = settings.svg_arc_tol if arc_tol is None else arc_tol
    fig, axes = plt.subplots(1, 2, figsize=(10, 5))
    theta = np.linspace(0.0, 2.0 * np.pi, 256)
    for ax, north, title in ((axes[0], True, "z ≥ 0"), (axes[1], False, "z ≤ 0")):
        ax.plot(np.sqrt(2) * np.cos(theta), np.sqrt(2) * np.sin(theta), color="0.6", lw=0.5)
        ax.set_aspect("equal")
        ax.set_axis_off()
        ax.set_title(title)
    for key, arcs in sorted(diagram.edge_index.items(), key=lambda kv: str(kv[0])):
        arc = arcs[0].canonical
        if arc.zero_length:
            continue
        pts = diagram.geometry.sample_arc(arc, tol)
        for ax, north in ((axes[0], True), (axes[1], False)):
            for run in _runs(pts, north):
                xy = _lambert(run, north)
                ax.plot(xy[:, 0], xy[:, 1], color="black", lw=0.6)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info("Wrote diagram SVG to %s", path)
