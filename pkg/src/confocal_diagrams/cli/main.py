"""
Command-line front end.

Subcommands: diagram, solve, verify and fixture. Human-readable summaries
go to stdout, telemetry records to stderr as one JSON object per line.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from tabulate import tabulate

from ..core.exceptions import (
    ConfigError,
    ConfocalError,
    ConvergenceError,
    InputFormatError,
    ResolutionError,
    VerificationError,
)
from ..core.logging_config import get_logger, set_level, setup_root_logger
from ..core.settings import settings
from ..kernel.rational import parse_rational
from ..measure.densities import UniformHemisphere, read_pgm
from ..oracle import checks
from ..oracle.fixtures import Fixture, build_fixture, targets_from_image
from ..power.weighted_point import WeightedPoint
from ..quadrics.io import parse_point_document, parse_quadric_document, point_document, quadric_document, read_json
from ..quadrics.types import DiagramKind, Quadric
from ..solver import (
    ReflectorProblem,
    ReflectorSolution,
    export_reflector_surface,
    load_problem,
    problem_document,
    solve,
    write_solution_json,
)
from ..solver.problem import SolutionFile
from ..sphere.diagram import IntersectionDiagram, build_diagram, diagram_of_quadrics
from ..sphere.export import write_diagram_json, write_diagram_svg
from ..utils.timeit import timed
from .config import RunConfig

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONVERGED = 2
EXIT_VERIFICATION = 3


def emit_telemetry(record: dict[str, Any]) -> None:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def parse_fixture_spec(spec: str) -> tuple[str, dict[str, str]]:
    """'quadratic:k=8,eps=0.05' -> ('quadratic', {'k': '8', 'eps': '0.05'})."""
    name, _, rest = spec.partition(":")
    params: dict[str, str] = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"fixture parameter {item!r} is not key=value")
        params[key.strip()] = value.strip()
    return name.strip(), params


# ---------------- inputs ----------------

class LoadedInput:
    def __init__(self, kind: Optional[DiagramKind], quadrics: Optional[list[Quadric]],
                 points: Optional[list[WeightedPoint]], fixture: Optional[Fixture] = None):
        self.kind = kind
        self.quadrics = quadrics
        self.points = points
        self.fixture = fixture


def _load_input(config: RunConfig) -> LoadedInput:
    kind = DiagramKind.parse(config.kind) if config.kind else None
    if config.fixture is not None:
        name, params = parse_fixture_spec(config.fixture)
        fx = build_fixture(name, params, seed=settings.seed)
        if kind is not None and fx.quadrics and kind.is_ellipsoid != fx.kind.is_ellipsoid:
            raise ConfigError(f"fixture {name!r} is a {fx.kind.value} family", {"kind": kind.value})
        return LoadedInput(kind or fx.kind, fx.quadrics or None, fx.points or None, fx)
    data = read_json(config.input)  # type: ignore[arg-type]
    if isinstance(data, dict) and "points" in data:
        return LoadedInput(kind, None, parse_point_document(data))
    file_kind, quadrics = parse_quadric_document(data)
    if kind is not None and kind.is_ellipsoid != file_kind.is_ellipsoid:
        raise InputFormatError(f"--kind {kind.value} does not match the {file_kind.value} quadrics in {config.input}")
    return LoadedInput(kind or file_kind, quadrics, None)


def _diagram(loaded: LoadedInput) -> IntersectionDiagram:
    if loaded.quadrics:
        return diagram_of_quadrics(loaded.quadrics, loaded.kind)  # type: ignore[arg-type]
    return build_diagram(loaded.points or [], kind=loaded.kind)


# ---------------- subcommands ----------------

def cmd_diagram(config: RunConfig) -> int:
    loaded = _load_input(config)
    with timed("diagram") as timer:
        diagram = _diagram(loaded)
    summary = diagram.summary()
    if config.output:
        write_diagram_json(diagram, config.output)
    if config.svg:
        write_diagram_svg(diagram, config.svg)
    rows = [[k, v if not isinstance(v, list) else " ".join(map(str, v))] for k, v in summary.items()]
    print(tabulate(rows, headers=["quantity", "value"], tablefmt="github"))
    emit_telemetry({"command": "diagram", **summary, "hidden_sites": diagram.hidden_sites(),
                    "seconds": round(timer.seconds, 6)})
    return EXIT_OK


def _image_problem(path: Path, cap_angle: float, union: bool = False) -> ReflectorProblem:
    """Targets from a grayscale PGM or a whitespace-separated text grid, lit from the lower hemisphere."""
    if not path.exists():
        raise InputFormatError(f"file not found: {path}")
    try:
        grid = read_pgm(path) if path.suffix.lower() == ".pgm" else np.loadtxt(path, ndmin=2)
    except ValueError as exc:
        raise InputFormatError(f"cannot read image {path}: {exc}") from exc
    directions, alphas = targets_from_image(grid, cap_angle)
    logger.info("Image %s gives %d targets", path, len(directions))
    return ReflectorProblem(directions, alphas, UniformHemisphere(), union)


def cmd_solve(config: RunConfig) -> int:
    if config.image is not None:
        problem = _image_problem(config.image, config.cap_angle, config.union)  # type: ignore[arg-type]
    else:
        problem = load_problem(config.input)  # type: ignore[arg-type]
        if config.union:
            problem.union = True
    with timed("solve") as timer:
        solution = solve(problem)
    if config.output:
        write_solution_json(solution, config.output)
    if config.obj:
        export_reflector_surface(problem, solution, config.obj, config.mesh_res)
    if config.svg and solution.diagram is not None:
        write_diagram_svg(solution.diagram, config.svg)
    rows = [[k, f"{phi:.12g}"] for k, phi in enumerate(solution.phi_history)]
    print(tabulate(rows, headers=["iterate", "Φ"], tablefmt="github"))
    print(f"max residual {solution.max_residual:.3g}, converged: {solution.converged}")
    emit_telemetry({"command": "solve", "N": len(problem), "iterations": solution.iterations,
                    "max_residual": solution.max_residual, "converged": solution.converged,
                    "seconds": round(timer.seconds, 6)})
    if not solution.converged:
        raise ConvergenceError("reflector solver did not reach tolerance", solution)
    return EXIT_OK


def _load_solution(path: Path) -> ReflectorSolution:
    try:
        doc = SolutionFile.model_validate(read_json(path))
    except ValidationError as exc:
        raise InputFormatError("invalid solution file", {"errors": [str(e["msg"]) for e in exc.errors()]}) from exc
    return ReflectorSolution(
        lambdas=[parse_rational(v) for v in doc.lambda_],
        gamma=np.array(doc.gamma),
        diagram=None,
        residuals=np.array(doc.residuals),
        iterations=doc.iterations,
        phi_history=doc.phi_history,
        converged=doc.converged,
        union=doc.union,
    )


def cmd_verify(config: RunConfig) -> int:
    results: list[checks.CheckResult] = []
    if config.solution is not None:
        problem = load_problem(config.problem)  # type: ignore[arg-type]
        solution = _load_solution(config.solution)
        problem.union = solution.union
        results.append(checks.check_solution_masses(problem, solution, config.samples, settings.seed))
    else:
        loaded = _load_input(config)
        diagram = _diagram(loaded)
        if loaded.quadrics:
            results.append(checks.check_reduction(loaded.quadrics, loaded.kind, config.samples))  # type: ignore[arg-type]
        results.append(checks.check_diagram(diagram, config.samples, loaded.quadrics, loaded.kind, loaded.points))
        if loaded.kind == DiagramKind.PARABOLOID_INTERSECTION and loaded.quadrics:
            results.append(checks.check_planar_counts(diagram))
        if loaded.fixture is not None:
            if loaded.fixture.discs:
                results.append(checks.check_flower(loaded.fixture, diagram))
            if loaded.fixture.expected:
                results.append(checks.check_fixture_expectations(loaded.fixture, diagram))
    rows = [[r.name, "ok" if r.passed else "FAILED",
             ", ".join(f"{k}={v}" for k, v in r.details.items())] for r in results]
    print(tabulate(rows, headers=["check", "status", "details"], tablefmt="github"))
    for r in results:
        emit_telemetry({"command": "verify", **r.as_dict()})
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise VerificationError("oracle checks failed", {"failed": failed})
    return EXIT_OK


def cmd_fixture(config: RunConfig) -> int:
    name, params = parse_fixture_spec(config.fixture or "")
    if name == "image":
        return _image_fixture(config, params)
    fx = build_fixture(name, params, seed=settings.seed)
    if config.kind is not None and fx.quadrics:
        kind = DiagramKind.parse(config.kind)
        if kind.is_ellipsoid != fx.kind.is_ellipsoid:
            raise ConfigError(f"fixture {name!r} cannot be written as {kind.value}")
        fx.kind = kind
    doc = quadric_document(fx.kind, fx.quadrics) if fx.quadrics else point_document(fx.points)
    text = json.dumps(doc, indent=2)
    if config.output:
        config.output.write_text(text, encoding="utf-8")
        logger.info("Wrote fixture %s to %s", name, config.output)
    else:
        print(text)
    emit_telemetry({"command": "fixture", "name": name, "sites": len(fx.quadrics or fx.points),
                    "expected": fx.expected})
    return EXIT_OK


def _image_fixture(config: RunConfig, params: dict[str, str]) -> int:
    if "path" not in params:
        raise ConfigError("the image fixture needs path=<file>")
    cap = float(params.get("cap", config.cap_angle))
    problem = _image_problem(Path(params["path"]), cap, params.get("union", "false").lower() == "true")
    text = json.dumps(problem_document(problem), indent=2)
    if config.output:
        config.output.write_text(text, encoding="utf-8")
        logger.info("Wrote image problem to %s", config.output)
    else:
        print(text)
    emit_telemetry({"command": "fixture", "name": "image", "sites": len(problem), "union": problem.union})
    return EXIT_OK


COMMANDS = {"diagram": cmd_diagram, "solve": cmd_solve, "verify": cmd_verify, "fixture": cmd_fixture}


# ---------------- parser ----------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="Triangulation and sampling seed")
    p.add_argument("--threads", type=int, help="Worker threads")
    p.add_argument("--log-level", default=None, help="Logging level (default from settings)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confocal-diagrams",
        description="Intersection and union diagrams of confocal quadrics, and far-field reflector design",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  confocal-diagrams diagram --kind pi --in two_antipodal.json --out diagram.json --svg diagram.svg
  confocal-diagrams diagram --kind ei --fixture quadratic:k=8,eps=0.05
  confocal-diagrams solve --in problem.json --out solution.json --obj reflector.obj
  confocal-diagrams verify --fixture flower:n=12
  confocal-diagrams fixture cube --out cube.json
  confocal-diagrams fixture image:path=target.pgm,cap=0.5 --out problem.json
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="Compute an intersection diagram")
    p.add_argument("--in", dest="input", type=Path, help="Quadric or weighted-point JSON")
    p.add_argument("--fixture", help="Fixture spec, e.g. flower:n=8")
    p.add_argument("--kind", choices=["pi", "pu", "ei", "eu"])
    p.add_argument("--out", dest="output", type=Path, help="Diagram JSON")
    p.add_argument("--svg", type=Path, help="Diagram drawing")
    p.add_argument("--keep-zero-length-arcs", action="store_true")
    _common(p)

    p = sub.add_parser("solve", help="Solve a far-field reflector problem")
    p.add_argument("--in", dest="input", type=Path, help="Problem JSON")
    p.add_argument("--image", type=Path, help="Grayscale PGM or text grid of target intensities")
    p.add_argument("--cap-angle", type=float, default=1.0471975511965976,
                   help="Angular radius of the target cap for --image (radians)")
    p.add_argument("--union", action="store_true", help="Union-of-paraboloids reflector")
    p.add_argument("--out", dest="output", type=Path, help="Solution JSON")
    p.add_argument("--obj", type=Path, help="Reflector surface OBJ")
    p.add_argument("--svg", type=Path, help="Final diagram drawing")
    p.add_argument("--mesh-res", type=int, default=4, help="Icosphere level of the surface mesh")
    p.add_argument("--tol", type=float, help="Residual tolerance")
    p.add_argument("--max-iter", type=int)
    p.add_argument("--arc-tol", type=float)
    p.add_argument("--quad-depth", type=int)
    _common(p)

    p = sub.add_parser("verify", help="Run brute-force oracles")
    p.add_argument("--in", dest="input", type=Path, help="Quadric or weighted-point JSON")
    p.add_argument("--fixture", help="Fixture spec")
    p.add_argument("--kind", choices=["pi", "pu", "ei", "eu"])
    p.add_argument("--problem", type=Path, help="Problem JSON of a solution")
    p.add_argument("--solution", type=Path, help="Solution JSON")
    p.add_argument("--samples", type=int, default=100_000)
    _common(p)

    p = sub.add_parser("fixture", help="Write a fixture in the quadric JSON format")
    p.add_argument("fixture", help="Fixture spec, e.g. quadratic:k=8,eps=0.05")
    p.add_argument("--kind", choices=["pi", "pu", "ei", "eu"])
    p.add_argument("--out", dest="output", type=Path)
    _common(p)
    return parser


def exit_code_for(exc: ConfocalError) -> int:
    if isinstance(exc, ConvergenceError):
        return EXIT_NOT_CONVERGED
    if isinstance(exc, (VerificationError, ResolutionError)):
        return EXIT_VERIFICATION
    return EXIT_INPUT


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse, validate and dispatch; returns the exit code."""
    args = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if v is not None and k != "log_level"}
    if args.log_level:
        set_level(args.log_level)
    try:
        config = RunConfig(**options)
    except ValidationError as exc:
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"])
            print(f"error: {loc + ': ' if loc else ''}{err['msg']}", file=sys.stderr)
        return EXIT_INPUT
    config.apply()
    logger.info("confocal-diagrams %s starting", config.command)
    try:
        return COMMANDS[config.command](config)
    except ConfocalError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.message)
        print(f"error: {exc.message}", file=sys.stderr)
        for key, value in exc.details.items():
            print(f"  {key}: {value}", file=sys.stderr)
        return exit_code_for(exc)
    except Exception as exc:
        logger.error("Unexpected error: %s", exc, exc_info=True)
        return EXIT_INPUT


def main() -> None:
    setup_root_logger()
    sys.exit(run())
