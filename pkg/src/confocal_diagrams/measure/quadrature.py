"""
Quadrature over spherical triangles.

A spherical triangle is carried by the flat triangle on its three unit
vertices. Nodes of a reference-triangle rule are placed on the flat
triangle and pushed radially onto the sphere; the area element of that
radial map at x is det(A, B, C) / ‖x‖³ per unit reference area.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import permutations
from typing import Callable, Optional

import numpy as np

from ..core.settings import settings

Integrand = Callable[[np.ndarray], np.ndarray]


def _orbit(*bary: float) -> list[tuple[float, float, float]]:
    return sorted(set(permutations(bary)))


@dataclass(frozen=True)
class QuadratureRule:
    """Symmetric rule on the reference triangle, applied after `depth` midpoint subdivisions."""

    barycentric: np.ndarray  # (K, 3)
    weights: np.ndarray  # (K,), summing to 1
    order: int
    depth: int = 2

    @classmethod
    def dunavant6(cls, depth: Optional[int] = None) -> "QuadratureRule":
        """12-point rule exact on polynomials of degree 6."""
        table = [
            (0.116786275726379, (0.501426509658179, 0.249286745170910, 0.249286745170910)),
            (0.050844906370207, (0.873821971016996, 0.063089014491502, 0.063089014491502)),
            (0.082851075618374, (0.053145049844817, 0.310352451033784, 0.636502499121399)),
        ]
        nodes, weights = [], []
        for w, bary in table:
            for b in _orbit(*bary):
                nodes.append(b)
                weights.append(w)
        return cls(np.array(nodes), np.array(weights), 6,
                   settings.quad_depth if depth is None else depth)

    @classmethod
    def default(cls) -> "QuadratureRule":
        return cls.dunavant6()

    def with_depth(self, depth: int) -> "QuadratureRule":
        return replace(self, depth=depth)

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class SingularPoint:
    """Unit vector near which triangles are refined further."""

    y: np.ndarray
    radius: float
    depth: int

    @classmethod
    def at(cls, y: np.ndarray) -> "SingularPoint":
        return cls(np.asarray(y, dtype=float), settings.singular_radius, settings.singular_depth)


def subdivide(triangles: np.ndarray, levels: int = 1) -> np.ndarray:
    """Split flat triangles (T, 3, 3) into 4**levels children each."""
    tris = np.asarray(triangles, dtype=float)
    for _ in range(levels):
        a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
        ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
        tris = np.concatenate([
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ])
    return tris


def _refine_toward(tris: np.ndarray, point: SingularPoint, levels: int) -> np.ndarray:
    """Graded refinement of the triangles close to `point.y`."""
    for level in range(levels):
        if len(tris) == 0:
            break
        verts = tris / np.linalg.norm(tris, axis=2, keepdims=True)
        dist = np.linalg.norm(verts - point.y, axis=2).min(axis=1)
        edges = np.linalg.norm(tris - np.roll(tris, 1, axis=1), axis=2)
        diam = edges.max(axis=1)
        reach = point.radius + diam if level == 0 else 2.0 * diam
        near = dist <= reach
        if not near.any():
            break
        tris = np.concatenate([tris[~near], subdivide(tris[near])])
    return tris


def triangle_determinants(tris: np.ndarray) -> np.ndarray:
    return np.einsum("ti,ti->t", tris[:, 0], np.cross(tris[:, 1], tris[:, 2]))


def integrate_triangles(
    triangles: np.ndarray,
    integrand: Integrand,
    rule: Optional[QuadratureRule] = None,
    singular: Optional[SingularPoint] = None,
) -> float:
    """
    Integral of `integrand` over the union of spherical triangles.

    Args:
        triangles: (T, 3, 3) unit-vector triples, positively oriented.
        integrand: Vectorized function of unit vectors (M, 3).
        rule: Reference rule and uniform subdivision depth.
        singular: Extra refinement near an integrable singularity.
    """
    rule = rule or QuadratureRule.default()
    tris = np.asarray(triangles, dtype=float).reshape(-1, 3, 3)
    if len(tris) == 0:
        return 0.0
    tris = subdivide(tris, rule.depth)
    if singular is not None:
        tris = _refine_toward(tris, singular, max(singular.depth - rule.depth, 0))
    nodes = np.einsum("kj,tjd->tkd", rule.barycentric, tris)
    r = np.linalg.norm(nodes, axis=2)
    jac = triangle_determinants(tris)[:, None] / r**3
    values = integrand((nodes / r[..., None]).reshape(-1, 3)).reshape(r.shape)
    per_triangle = (values * jac) @ rule.weights
    # reference triangle area
    return 0.5 * float(np.sum(per_triangle))
