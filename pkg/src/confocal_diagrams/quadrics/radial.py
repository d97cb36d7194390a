"""Radial functions of confocal quadrics and their envelopes."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .types import DiagramKind, Ellipsoid, Paraboloid, Quadric


def paraboloid_radial(p: Paraboloid, u: Sequence) -> Fraction | float:
    """
    λ / (1 − ⟨y, u⟩), +inf at the pole u = y.

    Exact when `u` is rational.
    """
    denom = 1 - sum(a * b for a, b in zip(p.direction.y, u))
    if denom <= 0:
        return math.inf
    if isinstance(denom, Fraction):
        return p.focal / denom
    return float(p.focal) / float(denom)


def ellipsoid_radial(q: Ellipsoid, u: Sequence) -> Fraction | float:
    """d / (1 − e⟨u, ŷ⟩); always finite."""
    denom = 1 - q.eccentricity * sum(a * b for a, b in zip(q.direction.y, u))
    if isinstance(denom, Fraction):
        return q.d / denom
    return float(q.d) / float(denom)


def radial(q: Quadric, u: Sequence) -> Fraction | float:
    if isinstance(q, Paraboloid):
        return paraboloid_radial(q, u)
    return ellipsoid_radial(q, u)


def radial_matrix(quadrics: Sequence[Quadric], directions: np.ndarray) -> np.ndarray:
    """
    Radial values of every quadric at every direction.

    Args:
        quadrics: N paraboloids or ellipsoids.
        directions: (M, 3) unit vectors.

    Returns:
        (M, N) array, +inf at paraboloid poles.
    """
    u = np.asarray(directions, dtype=float).reshape(-1, 3)
    axes = np.array([q.direction.array for q in quadrics]).reshape(-1, 3)
    cosines = u @ axes.T
    if all(isinstance(q, Paraboloid) for q in quadrics):
        lam = np.array([float(q.focal) for q in quadrics])
        denom = 1.0 - cosines
        with np.errstate(divide="ignore"):
            values = np.where(denom > 0, lam / np.where(denom > 0, denom, 1.0), np.inf)
        return values
    if all(isinstance(q, Ellipsoid) for q in quadrics):
        d = np.array([float(q.d) for q in quadrics])
        e = np.array([float(q.eccentricity) for q in quadrics])
        return d / (1.0 - e * cosines)
    raise TypeError("quadrics must be all paraboloids or all ellipsoids")


def envelope(quadrics: Sequence[Quadric], kind: DiagramKind, directions: np.ndarray) -> np.ndarray:
    """Lower (intersection kinds) or upper (union kinds) envelope radius per direction."""
    values = radial_matrix(quadrics, directions)
    return values.max(axis=1) if kind.is_union else values.min(axis=1)
