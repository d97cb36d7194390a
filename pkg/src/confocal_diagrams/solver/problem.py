"""Far-field reflector problems, dual variables and solutions, with their JSON forms."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from ..core.exceptions import GeometryError, InputFormatError
from ..core.logging_config import get_logger
from ..kernel.rational import format_rational, parse_rational
from ..measure.densities import Constant, Density, DensitySpec, HemisphereSpec
from ..quadrics.focal import rational_direction
from ..quadrics.types import DiagramKind, Paraboloid, UnitDirection
from ..sphere.diagram import IntersectionDiagram

logger = get_logger(__name__)

ALPHA_SUM_TOL = 1e-12
DENSITY_MASS_TOL = 1e-6


@dataclass
class ReflectorProblem:
    """
    Directions y_i, target masses α_i and source density ρ.

    With `union` set the reflector is the union of paraboloids and cells are
    taken from the upper envelope.
    """

    directions: list[UnitDirection]
    alphas: np.ndarray
    density: Density = field(default_factory=Constant)
    union: bool = False

    def __post_init__(self) -> None:
        self.alphas = np.asarray(self.alphas, dtype=float)
        if len(self.directions) == 0:
            raise InputFormatError("a reflector problem needs at least one direction")
        if self.alphas.shape != (len(self.directions),):
            raise InputFormatError("one target mass per direction is required",
                                   {"directions": len(self.directions), "alphas": int(self.alphas.size)})
        if np.any(self.alphas < 0) or not np.all(np.isfinite(self.alphas)):
            raise InputFormatError("target masses must be finite and non-negative")
        total = float(np.sum(self.alphas))
        if abs(total - 1.0) > ALPHA_SUM_TOL:
            raise InputFormatError("target masses must sum to 1", {"sum": total})
        if len(set(self.directions)) != len(self.directions):
            raise InputFormatError("directions must be pairwise distinct")
        mass = self.density.total_mass()
        if abs(mass - 1.0) > DENSITY_MASS_TOL:
            raise InputFormatError("source density must be a probability density", {"mass": mass})

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def kind(self) -> DiagramKind:
        return DiagramKind.PARABOLOID_UNION if self.union else DiagramKind.PARABOLOID_INTERSECTION

    @property
    def direction_array(self) -> np.ndarray:
        return np.array([y.array for y in self.directions]).reshape(-1, 3)


@dataclass(frozen=True)
class DualVariables:
    """γ_i = log λ_i."""

    gamma: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.gamma, dtype=float)
        if not np.all(np.isfinite(g)):
            raise GeometryError("dual variables must be finite")
        object.__setattr__(self, "gamma", g)

    @classmethod
    def zeros(cls, n: int) -> "DualVariables":
        return cls(np.zeros(n))

    @property
    def lambdas(self) -> np.ndarray:
        return np.exp(self.gamma)

    def pinned(self) -> "DualVariables":
        """Same diagram, with γ₁ = 0."""
        return DualVariables(self.gamma - self.gamma[0])


@dataclass
class ReflectorSolution:
    lambdas: list[Fraction]
    gamma: np.ndarray
    diagram: Optional[IntersectionDiagram]
    residuals: np.ndarray
    iterations: int
    phi_history: list[float]
    converged: bool
    union: bool = False
    message: str = ""

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals))) if len(self.residuals) else 0.0

    def paraboloids(self, problem: ReflectorProblem) -> list[Paraboloid]:
        return [Paraboloid(y, lam) for y, lam in zip(problem.directions, self.lambdas)]


# ---------------- JSON ----------------

DirectionField = list[Union[int, float, str, list[int]]]


class ProblemFile(BaseModel):
    directions: list[DirectionField] = Field(min_length=1)
    alphas: list[float]
    density: DensitySpec = Field(default_factory=HemisphereSpec)
    union: bool = False


class SolutionFile(BaseModel):
    lambda_: list[Union[int, str]] = Field(alias="lambda")
    lambda_float: list[float]
    gamma: list[float]
    residuals: list[float]
    iterations: int
    phi_history: list[float]
    converged: bool
    union: bool = False

    model_config = {"populate_by_name": True}


def _direction(coords: list) -> UnitDirection:
    if len(coords) != 3:
        raise InputFormatError("a direction needs 3 coordinates", {"direction": coords})
    if any(isinstance(c, float) for c in coords):
        d = rational_direction([float(c) for c in coords])
        logger.debug("Float direction %s rounded to a rational unit vector", coords)
        return d
    values = [parse_rational(f"{c[0]}/{c[1]}") if isinstance(c, list) else parse_rational(c) for c in coords]
    norm2 = sum(v * v for v in values)
    if norm2 != 1:
        # not exactly unit: treat as an approximation
        return rational_direction([float(v) for v in values])
    return UnitDirection(tuple(values))


def parse_problem_document(data: dict) -> ReflectorProblem:
    try:
        doc = ProblemFile.model_validate(data)
    except ValidationError as exc:
        errors = [f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()]
        raise InputFormatError("invalid reflector problem", {"errors": errors}) from exc
    try:
        directions = [_direction(c) for c in doc.directions]
    except (GeometryError, ValueError, ZeroDivisionError) as exc:
        raise InputFormatError(f"invalid direction: {exc}") from exc
    return ReflectorProblem(directions, np.array(doc.alphas), doc.density.build(), doc.union)


def load_problem(path: Path) -> ReflectorProblem:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    return parse_problem_document(data)


def problem_document(problem: ReflectorProblem) -> dict:
    return {
        "directions": [[format_rational(c) for c in y.y] for y in problem.directions],
        "alphas": [float(a) for a in problem.alphas],
        "density": problem.density.to_spec().model_dump(exclude_none=True),
        "union": problem.union,
    }


def save_problem(path: Path, problem: ReflectorProblem) -> None:
    Path(path).write_text(json.dumps(problem_document(problem), indent=2), encoding="utf-8")


def solution_document(solution: ReflectorSolution) -> SolutionFile:
    return SolutionFile(
        lambda_=[format_rational(lam) for lam in solution.lambdas],
        lambda_float=[float(lam) for lam in solution.lambdas],
        gamma=[float(g) for g in solution.gamma],
        residuals=[float(r) for r in solution.residuals],
        iterations=solution.iterations,
        phi_history=[float(p) for p in solution.phi_history if math.isfinite(p)],
        converged=solution.converged,
        union=solution.union,
    )


def write_solution_json(solution: ReflectorSolution, path: Path) -> None:
    Path(path).write_text(solution_document(solution).model_dump_json(by_alias=True, indent=2), encoding="utf-8")
    logger.info("Wrote solution to %s", path)
