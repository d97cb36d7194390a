"""Oracle checks run by `confocal-diagrams verify`."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from ..core.logging_config import get_logger
from ..power.weighted_point import WeightedPoint
from ..quadrics.reductions import quadrics_to_points
from ..quadrics.types import DiagramKind, Quadric
from ..solver.problem import ReflectorProblem, ReflectorSolution
from ..sphere.diagram import IntersectionDiagram
from .discs import disc_arrangement_components
from .fixtures import Fixture
from .sampling import diagram_agreement, power_assignment, reduction_agreement, sample_directions, sample_envelope

logger = get_logger(__name__)

SIGMA_BOUND = 4.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {"check": self.name, "passed": self.passed, **self.details}


def check_reduction(quadrics: Sequence[Quadric], kind: DiagramKind, samples: int) -> CheckResult:
    """Envelope winners equal power-distance winners of the reduced points."""
    report = reduction_agreement(quadrics, kind, quadrics_to_points(quadrics, kind), samples)
    return CheckResult("reduction", report.agreed == report.checked, report.as_dict())


def check_diagram(
    diagram: IntersectionDiagram,
    samples: int,
    quadrics: Optional[Sequence[Quadric]] = None,
    kind: Optional[DiagramKind] = None,
    points: Optional[Sequence[WeightedPoint]] = None,
) -> CheckResult:
    """Every certain sample lies in the cell of its brute-force winner."""
    if quadrics is not None and kind is not None:
        assignment = sample_envelope(quadrics, kind, samples)
    else:
        assignment = power_assignment(points if points is not None else diagram.sites, sample_directions(samples))
    report = diagram_agreement(diagram, assignment)
    return CheckResult("membership", report.agreed == report.checked, report.as_dict())


def check_planar_counts(diagram: IntersectionDiagram) -> CheckResult:
    """Euler-type bounds of lower-envelope paraboloid diagrams: V <= 2F − 4 and E <= 3F − 6."""
    c = diagram.counts()
    f = c["F"]
    ok = f <= len(diagram) and (f < 3 or (c["V"] <= 2 * f - 4 and c["E"] <= 3 * f - 6))
    ones = all(k <= 1 for k in diagram.components)
    return CheckResult("planar_counts", ok and ones, {**c, "single_component_cells": ones})


def check_flower(fixture: Fixture, diagram: IntersectionDiagram) -> CheckResult:
    """Component count of the base cell against the disc-arrangement flood fill."""
    expected = disc_arrangement_components(fixture.discs)
    got = diagram.components[0] if diagram.components else None
    return CheckResult("flower_components", got == expected, {"diagram": got, "flood_fill": expected})


def check_fixture_expectations(fixture: Fixture, diagram: IntersectionDiagram) -> CheckResult:
    counts = diagram.counts()
    failures = []
    for key in ("F", "V", "E"):
        if key in fixture.expected and counts[key] != fixture.expected[key]:
            failures.append(key)
    if "min_arcs" in fixture.expected and counts["E"] < fixture.expected["min_arcs"]:
        failures.append("min_arcs")
    if "center_holes" in fixture.expected:
        holes = len(diagram[0].cycles)
        if holes != fixture.expected["center_holes"]:
            failures.append("center_holes")
    return CheckResult("fixture", not failures, {**counts, "failed": failures})


def check_solution_masses(
    problem: ReflectorProblem, solution: ReflectorSolution, samples: int, seed: int = 0
) -> CheckResult:
    """Monte-Carlo cell masses of the solved reflector within four standard errors of α."""
    assignment = sample_envelope(solution.paraboloids(problem), problem.kind, samples, seed=seed,
                                 method="uniform", density=problem.density)
    sigma = assignment.mass_sigma()
    deviation = np.abs(assignment.masses - problem.alphas)
    slack = SIGMA_BOUND * np.maximum(sigma, 1.0 / samples)
    ok = bool(np.all(deviation <= slack))
    worst = int(np.argmax(deviation / slack))
    return CheckResult("solution_masses", ok, {
        "samples": samples,
        "max_deviation": float(deviation.max()),
        "worst_site": worst,
        "worst_sigmas": float(deviation[worst] / max(sigma[worst], 1e-300)),
    })
