import json
import math
from fractions import Fraction

import numpy as np
import pytest

from confocal_diagrams.core.exceptions import ConvergenceError, GeometryError, InputFormatError
from confocal_diagrams.measure import Constant, GridDensity, UniformHemisphere
from confocal_diagrams.oracle import check_solution_masses
from confocal_diagrams.solver import lbfgs
from confocal_diagrams.solver import (
    DualVariables,
    ReflectorProblem,
    evaluate,
    export_reflector_surface,
    grad_phi,
    load_problem,
    parse_problem_document,
    phi,
    rational_lambdas,
    reflector_mesh,
    save_problem,
    solve,
    write_solution_json,
)

from conftest import unit

LEFT = unit(Fraction(-3, 5), 0, Fraction(4, 5))
RIGHT = unit(Fraction(3, 5), 0, Fraction(4, 5))
FRONT = unit(0, Fraction(3, 5), Fraction(4, 5))


def two_targets(alphas, union=False):
    return ReflectorProblem([LEFT, RIGHT], np.array(alphas), UniformHemisphere(), union)


def three_targets(union=False):
    return ReflectorProblem([LEFT, RIGHT, FRONT], np.array([0.2, 0.3, 0.5]), UniformHemisphere(), union)


# ---------------- problem validation ----------------

def test_problem_validation():
    with pytest.raises(InputFormatError):
        two_targets([0.5, 0.6])
    with pytest.raises(InputFormatError):
        two_targets([1.5, -0.5])
    with pytest.raises(InputFormatError):
        ReflectorProblem([LEFT, LEFT], np.array([0.5, 0.5]))
    with pytest.raises(InputFormatError):
        ReflectorProblem([LEFT], np.array([0.5, 0.5]))
    with pytest.raises(InputFormatError):
        ReflectorProblem([LEFT], np.array([1.0]), GridDensity(np.ones((2, 2)), normalization="none"))
    p = two_targets([0.25, 0.75], union=True)
    assert p.kind.value == "pu"
    assert p.direction_array.shape == (2, 3)


def test_dual_variables():
    d = DualVariables(np.array([0.5, 1.0, -2.0]))
    assert np.allclose(d.pinned().gamma, [0.0, 0.5, -2.5])
    assert np.allclose(DualVariables.zeros(3).lambdas, 1.0)
    with pytest.raises(GeometryError):
        DualVariables(np.array([0.0, np.inf]))


def test_rational_lambdas():
    lams = rational_lambdas(np.array([0.0, math.log(2.0)]), bits=30)
    assert lams[0] == 1
    assert abs(float(lams[1]) - 2.0) < 1e-8
    assert all(isinstance(x, Fraction) for x in lams)


def test_problem_documents(tmp_path):
    problem = parse_problem_document({
        "directions": [[0.6, 0.0, 0.8], ["-3/5", 0, "4/5"]],
        "alphas": [0.25, 0.75],
    })
    assert isinstance(problem.density, UniformHemisphere)
    assert problem.directions[1] == LEFT
    assert sum(c * c for c in problem.directions[0].y) == 1
    assert np.allclose(problem.directions[0].array, [0.6, 0.0, 0.8])

    path = tmp_path / "problem.json"
    save_problem(path, problem)
    again = load_problem(path)
    assert again.directions == problem.directions
    assert np.allclose(again.alphas, problem.alphas)

    with pytest.raises(InputFormatError):
        parse_problem_document({"directions": [[0, 0, 1]], "alphas": [1], "density": {"type": "bogus"}})
    with pytest.raises(InputFormatError):
        parse_problem_document({"directions": [[0, 0]], "alphas": [1]})


# ---------------- functional ----------------

def test_symmetric_targets_are_optimal_at_zero():
    problem = two_targets([0.5, 0.5])
    ev = evaluate(problem, np.zeros(2), arc_tol=0.02)
    assert ev.masses == pytest.approx([0.5, 0.5], abs=1e-5)
    assert np.abs(ev.gradient).max() < 1e-5
    solution = solve(problem, tol=1e-5, arc_tol=0.02)
    assert solution.iterations == 0
    assert solution.converged


def test_empty_cell_gradient_is_minus_alpha():
    problem = two_targets([0.4, 0.6])
    # λ₂ = 10 keeps the second paraboloid beyond the first on the whole lower hemisphere
    g = grad_phi(problem, np.array([0.0, math.log(10.0)]), arc_tol=0.02)
    assert g == pytest.approx([0.6, -0.6], abs=1e-6)


def test_union_flips_the_functional():
    gamma = np.array([0.0, 0.3])
    pi = evaluate(two_targets([0.4, 0.6]), gamma, arc_tol=0.02)
    pu = evaluate(two_targets([0.4, 0.6], union=True), gamma, arc_tol=0.02)
    assert pu.gradient == pytest.approx(-(pu.masses - np.array([0.4, 0.6])))
    assert pi.gradient == pytest.approx(pi.masses - np.array([0.4, 0.6]))
    assert phi(two_targets([0.4, 0.6]), gamma, arc_tol=0.02) == pytest.approx(pi.value)


@pytest.mark.parametrize("union", [False, True])
def test_phi_ignores_a_common_shift(union):
    problem = three_targets(union)
    gamma = np.array([0.0, 0.4, -0.3])
    ev = evaluate(problem, gamma)
    assert ev.masses.sum() == pytest.approx(1.0, abs=1e-9)
    assert phi(problem, gamma + 0.7) == pytest.approx(ev.value, abs=1e-8)


@pytest.mark.parametrize("union", [False, True])
def test_gradient_matches_central_differences(union):
    problem = three_targets(union)
    gamma = np.array([0.0, 0.25, -0.15])
    g = grad_phi(problem, gamma)
    h = 1e-3
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        fd = (phi(problem, gamma + e) - phi(problem, gamma - e)) / (2 * h)
        assert fd == pytest.approx(g[k], abs=2e-5)


def test_phi_lies_below_its_tangent_planes():
    problem = three_targets()
    rng = np.random.default_rng(5)
    for _ in range(4):
        gamma, kappa = rng.uniform(-0.6, 0.6, size=(2, 3))
        ev = evaluate(problem, gamma)
        assert phi(problem, kappa) <= ev.value + ev.gradient @ (kappa - gamma) + 1e-6


# ---------------- solver ----------------

def test_single_target_needs_no_iteration():
    problem = ReflectorProblem([unit(0, 0, 1)], np.array([1.0]), UniformHemisphere())
    solution = solve(problem, tol=1e-5)
    assert solution.iterations == 0
    assert solution.converged
    assert solution.lambdas == [1]
    mesh = reflector_mesh(problem, solution, mesh_res=2)
    v = np.asarray(mesh.vertices)
    # every vertex lies on the paraboloid ‖x‖ − ⟨x, y⟩ = λ
    assert np.allclose(np.linalg.norm(v, axis=1) - v[:, 2], 1.0, atol=1e-9)


@pytest.mark.parametrize("union", [False, True])
def test_two_targets_converge(union):
    problem = two_targets([0.3, 0.7], union=union)
    solution = solve(problem, tol=1e-5, arc_tol=0.02)
    assert solution.converged, solution.message
    assert solution.max_residual <= 1e-5
    assert solution.gamma[0] == 0.0
    # a larger target means a nearer paraboloid for the intersection and a farther one for the union
    assert (solution.gamma[1] > 0) == union
    history = np.array(solution.phi_history)
    assert np.all(np.diff(history) >= -1e-9)
    check = check_solution_masses(problem, solution, 50_000, seed=1)
    assert check.passed, check.details


def test_residual_step_is_an_ascent_step():
    problem = two_targets([0.3, 0.7])
    objective = lbfgs._Objective(problem, None, 0.02, None)
    start = objective.evaluation(np.zeros(1))
    moved = lbfgs.residual_step(objective, np.zeros(1))
    assert moved is not None
    d = start.gradient[1:]
    h = float(d @ objective.evaluation(moved).gradient[1:])
    assert 0.0 <= h <= 0.1 * float(d @ d)
    assert objective.evaluation(moved).value > start.value


def test_solver_restarts_when_lbfgs_stops_early(monkeypatch):
    runs = []
    scipy_minimize = lbfgs.minimize

    def one_iteration(*args, **kwargs):
        runs.append(kwargs["options"]["maxiter"])
        return scipy_minimize(*args, **{**kwargs, "options": {**kwargs["options"], "maxiter": 1}})

    monkeypatch.setattr(lbfgs, "minimize", one_iteration)
    solution = solve(two_targets([0.3, 0.7]), tol=1e-5, arc_tol=0.02)
    assert solution.converged, solution.message
    assert len(runs) > 1
    assert np.all(np.diff(solution.phi_history) >= -1e-9)


def test_strict_mode_raises_with_the_partial_solution():
    problem = two_targets([0.1, 0.9])
    with pytest.raises(ConvergenceError) as info:
        solve(problem, tol=1e-12, max_iter=1, arc_tol=0.02, strict=True)
    assert info.value.solution is not None
    assert not info.value.solution.converged


def test_solution_and_surface_files(tmp_path):
    problem = two_targets([0.5, 0.5])
    solution = solve(problem, tol=1e-5, arc_tol=0.02)
    out = tmp_path / "solution.json"
    write_solution_json(solution, out)
    data = json.loads(out.read_text())
    assert data["lambda"] == [1, 1]
    assert data["converged"] is True
    assert data["union"] is False

    obj = tmp_path / "reflector.obj"
    mesh = export_reflector_surface(problem, solution, obj, mesh_res=2)
    assert len(mesh.faces) > 0
    assert obj.read_text().lstrip().startswith(("v ", "#"))


def test_constant_density_problem():
    problem = ReflectorProblem([unit(0, 0, 1), unit(0, 0, -1)], np.array([0.5, 0.5]), Constant())
    ev = evaluate(problem, np.zeros(2), arc_tol=0.02)
    assert ev.masses == pytest.approx([0.5, 0.5], abs=1e-5)
