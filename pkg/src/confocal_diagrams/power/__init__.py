"""Power diagrams of weighted points through their regular triangulation."""
from .export import TriangulationDump, dump_triangulation, write_triangulation_json
from .facets import CellFacets, Facet, Ridge, RidgeKind, facets_of_cell, radical_plane
from .predicates import power_side
from .triangulation import (
    INFINITE,
    RegularTriangulation,
    build_triangulation,
    dual_vertex,
    weighted_circumcenter,
)
from .weighted_point import WeightedPoint, reindex

__all__ = [
    "INFINITE",
    "CellFacets",
    "Facet",
    "RegularTriangulation",
    "Ridge",
    "RidgeKind",
    "TriangulationDump",
    "WeightedPoint",
    "build_triangulation",
    "dual_vertex",
    "dump_triangulation",
    "facets_of_cell",
    "power_side",
    "radical_plane",
    "reindex",
    "weighted_circumcenter",
    "write_triangulation_json",
]
