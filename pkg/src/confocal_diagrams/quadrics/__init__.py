"""Confocal paraboloids and ellipsoids, and their reductions to power diagrams."""
from .focal import (
    direction_from_stereographic,
    disc_from_frame,
    focal_projection,
    invert_focal_map,
    rational_direction,
)
from .genericity import is_generic
from .radial import ellipsoid_radial, envelope, paraboloid_radial, radial, radial_matrix
from .reductions import ellipsoids_from_weighted_points, quadrics_to_points, to_weighted_point
from .types import DiagramKind, DiscSpec, Ellipsoid, Paraboloid, Quadric, UnitDirection, frame_of

__all__ = [
    "DiagramKind",
    "DiscSpec",
    "Ellipsoid",
    "Paraboloid",
    "Quadric",
    "UnitDirection",
    "direction_from_stereographic",
    "disc_from_frame",
    "ellipsoid_radial",
    "ellipsoids_from_weighted_points",
    "envelope",
    "focal_projection",
    "frame_of",
    "invert_focal_map",
    "is_generic",
    "paraboloid_radial",
    "quadrics_to_points",
    "radial",
    "radial_matrix",
    "rational_direction",
    "to_weighted_point",
]
