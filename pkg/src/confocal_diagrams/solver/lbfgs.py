"""
L-BFGS ascent on Φ with γ₁ pinned to zero.

scipy's L-BFGS-B drives the iteration with its own Moré-Thuente line
search. Φ is only known to quadrature accuracy, so that search can stop
on a relative-reduction or line-search failure while the residuals are
still above tolerance. The run is then restarted from its last iterate
after one step along ∇Φ whose length is chosen from residuals alone,
until the tolerance is met or either the iteration budget or
`lbfgs_restarts` runs out.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from ..core.exceptions import ConvergenceError
from ..core.logging_config import get_logger
from ..core.settings import settings
from ..measure.quadrature import QuadratureRule
from ..utils.timeit import timed
from .functional import Evaluation, evaluate
from .problem import ReflectorProblem, ReflectorSolution

logger = get_logger(__name__)

# curvature bound of the residual-only step: 0 <= ⟨d, ∇Φ(x + td)⟩ <= c2 ⟨d, d⟩
_CURVATURE = 0.1
_SEARCH_EVALS = 30


class _Objective:
    """−Φ over γ[1:], memoized on the last points evaluated."""

    def __init__(self, problem: ReflectorProblem, rule, arc_tol, threads):
        self.problem = problem
        self.rule = rule
        self.arc_tol = arc_tol
        self.threads = threads
        self.cache: dict[bytes, Evaluation] = {}
        self.calls = 0

    def full(self, free: np.ndarray) -> np.ndarray:
        return np.concatenate([[0.0], np.asarray(free, dtype=float)])

    def evaluation(self, free: np.ndarray) -> Evaluation:
        gamma = self.full(free)
        key = gamma.tobytes()
        if key not in self.cache:
            self.calls += 1
            if len(self.cache) > 8:
                self.cache.clear()
            self.cache[key] = evaluate(self.problem, gamma, self.rule, self.arc_tol, self.threads)
        return self.cache[key]

    def residual(self, free: np.ndarray) -> float:
        return float(np.max(np.abs(self.evaluation(free).gradient)))

    def __call__(self, free: np.ndarray) -> tuple[float, np.ndarray]:
        ev = self.evaluation(free)
        return -ev.value, -ev.gradient[1:]


def residual_step(objective: _Objective, free: np.ndarray) -> Optional[np.ndarray]:
    """
    Point along d = ∇Φ[1:] from `free` where the directional derivative
    h(t) = ⟨d, ∇Φ(free + t·d)[1:]⟩ satisfies 0 <= h(t) <= c2·h(0).

    Φ is concave, so h decreases along the ray and bisection on its sign
    brackets the point. Only gradients are compared. Returns None when no
    ascent is possible.
    """
    d = objective.evaluation(free).gradient[1:]
    h0 = float(d @ d)
    if h0 == 0.0:
        return None
    lo, hi, t = 0.0, math.inf, 1.0
    for _ in range(_SEARCH_EVALS):
        h = float(d @ objective.evaluation(free + t * d).gradient[1:])
        if 0.0 <= h <= _CURVATURE * h0:
            return free + t * d
        if h > 0.0:
            lo = t
        else:
            hi = t
        t = 2.0 * t if math.isinf(hi) else 0.5 * (lo + hi)
    return free + lo * d if lo > 0.0 else None


def solve(
    problem: ReflectorProblem,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    *,
    rule: Optional[QuadratureRule] = None,
    arc_tol: Optional[float] = None,
    threads: Optional[int] = None,
    strict: bool = False,
) -> ReflectorSolution:
    """
    Maximize Φ from γ = 0 until ‖∇Φ‖∞ <= tol or `max_iter` iterations.

    Each L-BFGS-B run uses scipy's internal line search in place of a
    strong-Wolfe search with c1 = 1e-4, c2 = 0.9. A run that ends above
    tolerance is followed by one residual-only step and a fresh run.

    Args:
        problem: Directions, target masses and source density.
        tol: Sup-norm tolerance on the mass residuals.
        max_iter: Iteration cap over all runs; each residual step counts as one.
        strict: Raise ConvergenceError (carrying the partial solution)
            instead of returning it with `converged=False`.
    """
    tol = settings.solver_tol if tol is None else tol
    max_iter = settings.max_iter if max_iter is None else max_iter
    n = len(problem)
    objective = _Objective(problem, rule, arc_tol, threads)
    history: list[float] = []

    def on_iterate(free: np.ndarray) -> None:
        ev = objective.evaluation(free)
        history.append(ev.value)
        worst = float(np.max(np.abs(ev.gradient)))
        logger.info("iteration %d: Φ=%.12g max residual=%.3g", len(history), ev.value, worst)
        if worst <= tol:
            raise StopIteration

    free = np.zeros(n - 1)
    iterations, restarts = 0, 0
    with timed("reflector solve"):
        start = objective.evaluation(free)
        history.append(start.value)
        if n == 1 or objective.residual(free) <= tol:
            message = "initial point is optimal"
        else:
            while True:
                result = minimize(
                    objective,
                    free,
                    jac=True,
                    method="L-BFGS-B",
                    callback=on_iterate,
                    options={
                        "maxcor": settings.lbfgs_memory,
                        "maxiter": max_iter - iterations,
                        "gtol": tol,
                        "ftol": 1e-15,
                    },
                )
                free = np.asarray(result.x, dtype=float)
                iterations += int(result.nit)
                message = str(result.message)
                worst = objective.residual(free)
                if worst <= tol or iterations >= max_iter or restarts >= settings.lbfgs_restarts:
                    break
                stepped = residual_step(objective, free)
                if stepped is None:
                    break
                restarts += 1
                iterations += 1
                free = stepped
                history.append(objective.evaluation(free).value)
                logger.info("L-BFGS-B stopped at residual %.3g (%s); restart %d from residual %.3g",
                            worst, message, restarts, objective.residual(free))
                if objective.residual(free) <= tol or iterations >= max_iter:
                    break
        final = objective.evaluation(free)

    residuals = final.masses - problem.alphas
    converged = bool(np.max(np.abs(residuals)) <= tol)
    solution = ReflectorSolution(
        lambdas=final.lambdas,
        gamma=final.gamma,
        diagram=final.diagram,
        residuals=residuals,
        iterations=iterations,
        phi_history=history,
        converged=converged,
        union=problem.union,
        message=message,
    )
    if converged:
        logger.info("Converged after %d iterations, %d restarts (%d evaluations), max residual %.3g",
                    iterations, restarts, objective.calls, solution.max_residual)
    else:
        logger.warning("Stopped after %d iterations with max residual %.3g: %s",
                       iterations, solution.max_residual, message)
        if strict:
            raise ConvergenceError("reflector solver did not reach tolerance", solution,
                                   {"max_residual": solution.max_residual, "iterations": iterations,
                                    "restarts": restarts})
    return solution
