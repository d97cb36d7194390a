"""Densities, cell tessellation and quadrature."""
from .densities import Constant, Density, DensitySpec, GridDensity, UniformHemisphere, read_pgm
from .integrals import (
    CellIntegrals,
    cell_cost_integral,
    cell_integrals,
    cell_mass,
    diagram_integrals,
    integrate_sphere,
    transport_cost,
)
from .quadrature import QuadratureRule, SingularPoint, integrate_triangles, subdivide
from .tessellation import SphericalTessellation, clip_halfspace, sphere_tessellation, tessellate_cell

__all__ = [
    "CellIntegrals",
    "Constant",
    "Density",
    "DensitySpec",
    "GridDensity",
    "QuadratureRule",
    "SingularPoint",
    "SphericalTessellation",
    "UniformHemisphere",
    "cell_cost_integral",
    "cell_integrals",
    "cell_mass",
    "clip_halfspace",
    "diagram_integrals",
    "integrate_sphere",
    "integrate_triangles",
    "read_pgm",
    "sphere_tessellation",
    "subdivide",
    "tessellate_cell",
]
