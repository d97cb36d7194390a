"""
Cell masses and transport-cost integrals.

Each cell is tessellated once; mass and cost share the triangles. Per-cell
work runs on a thread pool and results are reduced in site order so sums
do not depend on the thread count.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..core.logging_config import get_logger
from ..core.settings import settings
from ..sphere.cells import IntersectionCell
from ..sphere.diagram import IntersectionDiagram
from .densities import Density
from .quadrature import Integrand, QuadratureRule, SingularPoint, integrate_triangles
from .tessellation import SphericalTessellation, sphere_tessellation, tessellate_cell

logger = get_logger(__name__)

_LOG_FLOOR = 1e-300


def transport_cost(u: np.ndarray, y: np.ndarray) -> np.ndarray:
    """c(u, y) = −log(1 − ⟨u, y⟩), clipped away from the pole at u = y."""
    return -np.log(np.maximum(1.0 - u @ y, _LOG_FLOOR))


def integrate_sphere(f: Integrand, rule: Optional[QuadratureRule] = None) -> float:
    """Integral of `f` over the whole sphere."""
    return integrate_triangles(sphere_tessellation().triangles, f, rule)


def _support(tess: SphericalTessellation, density: Density) -> np.ndarray:
    if density.support_axis is None:
        return tess.triangles
    return tess.clipped(density.support_axis).triangles


@dataclass(frozen=True)
class CellIntegrals:
    mass: float
    cost: float
    triangles: int


def cell_integrals(
    cell: IntersectionCell,
    y: Optional[np.ndarray],
    density: Density,
    rule: Optional[QuadratureRule] = None,
    arc_tol: Optional[float] = None,
) -> CellIntegrals:
    """Mass of a cell and, when `y` is given, ∫ c(u, y) ρ(u) du over it."""
    tess = tessellate_cell(cell, arc_tol)
    tris = _support(tess, density)
    if len(tris) == 0:
        return CellIntegrals(0.0, 0.0, 0)
    mass = integrate_triangles(tris, density, rule)
    cost = 0.0
    if y is not None:
        y = np.asarray(y, dtype=float)
        cost = integrate_triangles(
            tris, lambda u: transport_cost(u, y) * density(u), rule, SingularPoint.at(y)
        )
    return CellIntegrals(mass, cost, len(tris))


def cell_mass(
    cell: IntersectionCell,
    density: Density,
    rule: Optional[QuadratureRule] = None,
    arc_tol: Optional[float] = None,
) -> float:
    """ρ(cell), the density-weighted area."""
    return cell_integrals(cell, None, density, rule, arc_tol).mass


def cell_cost_integral(
    cell: IntersectionCell,
    y: np.ndarray,
    density: Density,
    rule: Optional[QuadratureRule] = None,
    arc_tol: Optional[float] = None,
) -> float:
    """∫_cell −log(1 − ⟨u, y⟩) ρ(u) du, refined near u = y."""
    return cell_integrals(cell, y, density, rule, arc_tol).cost


def diagram_integrals(
    diagram: IntersectionDiagram,
    density: Density,
    directions: Optional[Sequence[np.ndarray] | np.ndarray] = None,
    rule: Optional[QuadratureRule] = None,
    arc_tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Masses and cost integrals of every cell.

    Args:
        diagram: Intersection diagram.
        density: Source density.
        directions: Per-cell cost direction; costs are zero when omitted.
        rule: Quadrature rule.
        arc_tol: Angular step of the boundary arcs.
        threads: Worker threads.
    """
    threads = settings.threads if threads is None else threads
    ys = [None] * len(diagram) if directions is None else [np.asarray(y, float) for y in directions]

    def work(k: int) -> CellIntegrals:
        return cell_integrals(diagram[k], ys[k], density, rule, arc_tol)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(work, range(len(diagram))))
    masses = np.array([r.mass for r in results])
    costs = np.array([r.cost for r in results])
    logger.debug("Integrated %d cells over %d triangles", len(results), sum(r.triangles for r in results))
    return masses, costs
