"""
The concave functional whose maximizers solve the far-field problem.

For the intersection reflector

    Φ(γ) = Σ_i ∫_{cell_i} (c(u, y_i) + γ_i) ρ(u) du − Σ_i γ_i α_i,
    ∇Φ(γ)_i = ρ(cell_i) − α_i,

with cells taken from the PI diagram of λ = exp(γ). The union reflector
uses the PU diagram and flips both signs.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..core.logging_config import get_logger
from ..core.settings import settings
from ..kernel.rational import rationalize
from ..measure.integrals import diagram_integrals
from ..measure.quadrature import QuadratureRule
from ..quadrics.types import Paraboloid
from ..sphere.diagram import IntersectionDiagram, diagram_of_quadrics
from .problem import DualVariables, ReflectorProblem

logger = get_logger(__name__)


@dataclass
class Evaluation:
    gamma: np.ndarray
    lambdas: list[Fraction]
    value: float
    gradient: np.ndarray
    masses: np.ndarray
    diagram: IntersectionDiagram


def rational_lambdas(gamma: np.ndarray, bits: Optional[int] = None) -> list[Fraction]:
    """exp(γ_i) rounded to rationals with `bits` significant bits."""
    bits = settings.rational_bits if bits is None else bits
    return [rationalize(float(np.exp(g)), bits) for g in np.asarray(gamma, dtype=float)]


def evaluate(
    problem: ReflectorProblem,
    gamma: np.ndarray | DualVariables,
    rule: Optional[QuadratureRule] = None,
    arc_tol: Optional[float] = None,
    threads: Optional[int] = None,
) -> Evaluation:
    """Φ and ∇Φ from a single diagram construction."""
    if isinstance(gamma, DualVariables):
        gamma = gamma.gamma
    gamma = np.asarray(DualVariables(gamma).gamma)
    lambdas = rational_lambdas(gamma)
    quadrics = [Paraboloid(y, lam) for y, lam in zip(problem.directions, lambdas)]
    diagram = diagram_of_quadrics(quadrics, problem.kind, with_components=False, threads=threads)
    masses, costs = diagram_integrals(diagram, problem.density, problem.direction_array,
                                      rule=rule, arc_tol=arc_tol, threads=threads)
    value = float(np.sum(costs) + np.sum(gamma * masses) - np.sum(gamma * problem.alphas))
    gradient = masses - problem.alphas
    if problem.union:
        value, gradient = -value, -gradient
    logger.debug("Φ=%.12g ‖∇Φ‖∞=%.3g", value, float(np.max(np.abs(gradient))))
    return Evaluation(gamma, lambdas, value, gradient, masses, diagram)


def phi(problem: ReflectorProblem, gamma, **kwargs) -> float:
    return evaluate(problem, gamma, **kwargs).value


def grad_phi(problem: ReflectorProblem, gamma, **kwargs) -> np.ndarray:
    """Cell masses minus targets (negated for the union reflector); empty cells give −α_i."""
    return evaluate(problem, gamma, **kwargs).gradient
