"""Intersection and union diagrams of confocal quadrics on the unit sphere."""
__version__ = "0.1.0"
