"""Radial triangle mesh of the reflector surface."""
from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np
import trimesh
from trimesh.exchange.obj import export_obj
from scipy.spatial import ConvexHull

from ..core.logging_config import get_logger
from ..quadrics.radial import radial_matrix
from ..quadrics.types import DiagramKind
from .problem import ReflectorProblem, ReflectorSolution

logger = get_logger(__name__)


def _boundary_samples(solution: ReflectorSolution, tol: float) -> np.ndarray:
    diagram = solution.diagram
    if diagram is None:
        return np.zeros((0, 3))
    pts = [diagram.geometry.sample_arc(arcs[0].canonical, tol)
           for arcs in diagram.edge_index.values() if not arcs[0].zero_length]
    return np.concatenate(pts) if pts else np.zeros((0, 3))


def reflector_mesh(
    problem: ReflectorProblem,
    solution: ReflectorSolution,
    mesh_res: int = 4,
    boundary_tol: Optional[float] = 0.02,
) -> trimesh.Trimesh:
    """
    Mesh of u ↦ r(u)·u, r the lower envelope λ_i/(1 − ⟨y_i, u⟩) (upper for
    the union reflector), over an icosphere refined along the cell
    boundaries. Directions where r is infinite are left out.

    Args:
        problem: Problem the solution belongs to.
        solution: Focal distances and their diagram.
        mesh_res: Icosphere subdivision level.
        boundary_tol: Angular step of the boundary samples; None skips them.
    """
    u = trimesh.creation.icosphere(subdivisions=mesh_res).vertices
    if boundary_tol is not None:
        u = np.concatenate([u, _boundary_samples(solution, boundary_tol)])
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    u = np.unique(np.round(u, 12), axis=0)
    u = u / np.linalg.norm(u, axis=1, keepdims=True)
    faces = ConvexHull(u).simplices
    # outward orientation
    normals = np.cross(u[faces[:, 1]] - u[faces[:, 0]], u[faces[:, 2]] - u[faces[:, 0]])
    flip = np.einsum("ij,ij->i", normals, u[faces[:, 0]]) < 0
    faces[flip] = faces[flip][:, ::-1]

    kind = DiagramKind.PARABOLOID_UNION if problem.union else DiagramKind.PARABOLOID_INTERSECTION
    values = radial_matrix(solution.paraboloids(problem), u)
    radius = values.max(axis=1) if kind.is_union else values.min(axis=1)
    finite = np.isfinite(radius)
    mesh = trimesh.Trimesh(vertices=np.where(finite[:, None], radius[:, None] * u, 0.0),
                           faces=faces, process=False)
    mesh.update_faces(finite[faces].all(axis=1))
    mesh.remove_unreferenced_vertices()
    logger.info("Reflector mesh: %d vertices, %d faces", len(mesh.vertices), len(mesh.faces))
    return mesh


def export_reflector_surface(
    problem: ReflectorProblem,
    solution: ReflectorSolution,
    path: Path,
    mesh_res: int = 4,
) -> trimesh.Trimesh:
    """Write the reflector mesh as an ASCII OBJ file."""
    mesh = reflector_mesh(problem, solution, mesh_res)
    Path(path).write_text(export_obj(mesh, include_normals=False), encoding="utf-8")
    logger.info("Wrote reflector surface to %s", path)
    return mesh
