"""Intersection of power diagrams with the unit sphere."""
from .boundary import build_cell_boundary, chain_cycles, facet_arcs
from .cells import Cycle, IntersectionCell, OrientedArc, SphereVertex
from .diagram import IntersectionDiagram, build_diagram, diagram_of_quadrics
from .geometry import Circle, DiagramGeometry, cell_contains
from .predicates import (
    SECANT,
    circle_center_in_facet,
    has_on,
    line_sphere_intersections,
    number_of_intersections,
    plane_crossing_sphere,
    ray_sphere_intersections,
    ridge_crossings,
    segment_sphere_intersections,
)
from .projection import Stereographic, cell_region, component_count

__all__ = [
    "SECANT",
    "Circle",
    "Cycle",
    "DiagramGeometry",
    "IntersectionCell",
    "IntersectionDiagram",
    "OrientedArc",
    "SphereVertex",
    "Stereographic",
    "build_cell_boundary",
    "build_diagram",
    "cell_contains",
    "cell_region",
    "chain_cycles",
    "circle_center_in_facet",
    "component_count",
    "diagram_of_quadrics",
    "facet_arcs",
    "has_on",
    "line_sphere_intersections",
    "number_of_intersections",
    "plane_crossing_sphere",
    "ray_sphere_intersections",
    "ridge_crossings",
    "segment_sphere_intersections",
]
