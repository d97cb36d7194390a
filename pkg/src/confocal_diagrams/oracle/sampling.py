"""
Brute-force envelope sampling.

Winners are read directly off the radial functions of the quadrics, never
from a power diagram, so they can check the diagram pipeline end to end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from ..core.logging_config import get_logger
from ..core.settings import settings
from ..measure.densities import Density
from ..power.weighted_point import WeightedPoint
from ..quadrics.radial import radial_matrix
from ..quadrics.types import DiagramKind, Quadric
from ..sphere.diagram import IntersectionDiagram

logger = get_logger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))

SampleMethod = Literal["fibonacci", "uniform"]


def fibonacci_sphere(m: int) -> np.ndarray:
    """Deterministic, nearly even lattice of `m` unit vectors."""
    i = np.arange(m, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / m
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = i * GOLDEN_ANGLE
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def uniform_sphere(m: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((m, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def sample_directions(m: int, method: SampleMethod = "fibonacci", seed: Optional[int] = None) -> np.ndarray:
    if m < 1:
        raise ValueError("at least one sample is required")
    if method == "fibonacci":
        return fibonacci_sphere(m)
    return uniform_sphere(m, settings.seed if seed is None else seed)


@dataclass
class SampleAssignment:
    """Winning site per sample and the resulting mass estimates."""

    samples: np.ndarray  # (M, 3)
    winners: np.ndarray  # (M,)
    uncertain: np.ndarray  # (M,) bool, best two values within the margin
    masses: np.ndarray  # (N,)
    weights: np.ndarray  # (M,) density weight of each sample, summing to the total mass

    @property
    def boundary_count(self) -> int:
        return int(self.uncertain.sum())

    def mass_sigma(self) -> np.ndarray:
        """Standard error of each mass estimate."""
        m = len(self.samples)
        per_site = np.zeros((len(self.masses),))
        for i in range(len(self.masses)):
            x = np.where(self.winners == i, self.weights * m, 0.0)
            per_site[i] = x.std(ddof=1) / math.sqrt(m) if m > 1 else 0.0
        return per_site


def _winners(values: np.ndarray, largest: bool, margin: float) -> tuple[np.ndarray, np.ndarray]:
    """Arg-best per row and whether the runner-up is within a relative margin."""
    scores = -values if largest else values
    if scores.shape[1] == 1:
        return np.zeros(len(scores), dtype=int), np.zeros(len(scores), dtype=bool)
    order = np.argpartition(scores, 1, axis=1)[:, :2]
    rows = np.arange(len(scores))
    first, second = scores[rows, order[:, 0]], scores[rows, order[:, 1]]
    swap = second < first
    best = np.where(swap, order[:, 1], order[:, 0])
    lo, hi = np.minimum(first, second), np.maximum(first, second)
    with np.errstate(invalid="ignore"):
        gap = hi - lo
        scale = np.maximum(np.abs(np.where(np.isfinite(lo), lo, 0.0)), 1.0)
        uncertain = ~(gap > margin * scale)
    return best, uncertain


def _assignment(samples: np.ndarray, values: np.ndarray, largest: bool,
                density: Optional[Density], margin: Optional[float]) -> SampleAssignment:
    margin = settings.boundary_margin if margin is None else margin
    winners, uncertain = _winners(values, largest, margin)
    m, n = values.shape
    if density is None:
        weights = np.full(m, 1.0 / m)
    else:
        weights = density(samples) * (4.0 * math.pi / m)
    masses = np.bincount(winners, weights=weights, minlength=n)
    return SampleAssignment(samples, winners, uncertain, masses, weights)


def sample_envelope(
    quadrics: Sequence[Quadric],
    kind: DiagramKind | str,
    m: int,
    seed: Optional[int] = None,
    method: SampleMethod = "fibonacci",
    density: Optional[Density] = None,
    margin: Optional[float] = None,
) -> SampleAssignment:
    """
    Argmin (intersection kinds) or argmax (union kinds) of the radial
    functions at `m` sample directions.

    Without a density the masses are winner frequencies; with one they are
    density-weighted estimates of ρ(cell).
    """
    kind = DiagramKind.parse(kind)
    samples = sample_directions(m, method, seed)
    values = radial_matrix(quadrics, samples)
    return _assignment(samples, values, kind.is_union, density, margin)


def power_assignment(
    points: Sequence[WeightedPoint],
    samples: np.ndarray,
    density: Optional[Density] = None,
    margin: Optional[float] = None,
) -> SampleAssignment:
    """Argmin of the power distance ‖u − p‖² + w, evaluated in floats."""
    arr = np.array([p.as_floats() for p in points]).reshape(-1, 4)
    pos, w = arr[:, :3], arr[:, 3]
    lift = (pos * pos).sum(axis=1) + w
    values = 1.0 + lift[None, :] - 2.0 * samples @ pos.T
    return _assignment(samples, values, False, density, margin)


@dataclass
class AgreementReport:
    samples: int
    uncertain: int
    agreed: int

    @property
    def checked(self) -> int:
        return self.samples - self.uncertain

    @property
    def rate(self) -> float:
        return self.agreed / self.checked if self.checked else 1.0

    def as_dict(self) -> dict[str, float | int]:
        return {"samples": self.samples, "uncertain": self.uncertain,
                "agreed": self.agreed, "rate": self.rate}


def reduction_agreement(
    quadrics: Sequence[Quadric],
    kind: DiagramKind | str,
    points: Sequence[WeightedPoint],
    m: int,
    margin: Optional[float] = None,
) -> AgreementReport:
    """Envelope winners against power-distance winners of the mapped points."""
    envelope = sample_envelope(quadrics, kind, m, margin=margin)
    power = power_assignment(points, envelope.samples, margin=margin)
    certain = ~envelope.uncertain
    agreed = int(np.sum(envelope.winners[certain] == power.winners[certain]))
    return AgreementReport(m, int(envelope.uncertain.sum()), agreed)


def diagram_agreement(diagram: IntersectionDiagram, assignment: SampleAssignment) -> AgreementReport:
    """Fraction of certain samples lying in the cell of their envelope winner."""
    certain = np.flatnonzero(~assignment.uncertain)
    agreed = 0
    for site, cell in enumerate(diagram.cells):
        idx = certain[assignment.winners[certain] == site]
        if len(idx) == 0:
            continue
        agreed += int(np.sum(cell.contains(assignment.samples[idx])))
    report = AgreementReport(len(assignment.samples), assignment.boundary_count, agreed)
    logger.info("Diagram agrees with envelope sampling on %d / %d samples", agreed, report.checked)
    return report
