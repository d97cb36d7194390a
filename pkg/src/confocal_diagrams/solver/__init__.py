"""Far-field reflector design by maximizing a concave dual functional."""
from .functional import Evaluation, evaluate, grad_phi, phi, rational_lambdas
from .lbfgs import solve
from .problem import (
    DualVariables,
    ReflectorProblem,
    ReflectorSolution,
    load_problem,
    parse_problem_document,
    problem_document,
    save_problem,
    solution_document,
    write_solution_json,
)
from .surface import export_reflector_surface, reflector_mesh

__all__ = [
    "DualVariables",
    "Evaluation",
    "ReflectorProblem",
    "ReflectorSolution",
    "evaluate",
    "export_reflector_surface",
    "grad_phi",
    "load_problem",
    "parse_problem_document",
    "phi",
    "problem_document",
    "rational_lambdas",
    "reflector_mesh",
    "save_problem",
    "solution_document",
    "solve",
    "write_solution_json",
]
