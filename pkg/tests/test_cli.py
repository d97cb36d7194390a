import json

import pytest

from confocal_diagrams.cli import RunConfig, run
from confocal_diagrams.cli.main import exit_code_for, parse_fixture_spec
from confocal_diagrams.core.exceptions import (
    ConfigError,
    ConvergenceError,
    GeometryError,
    ResolutionError,
    VerificationError,
)
from confocal_diagrams.core.logging_config import get_logger
from confocal_diagrams.core.settings import settings


def telemetry(err: str) -> list[dict]:
    return [json.loads(line) for line in err.splitlines() if line.startswith("{")]


def write_problem(path, alphas, union=False):
    path.write_text(json.dumps({
        "directions": [["-3/5", 0, "4/5"], ["3/5", 0, "4/5"]],
        "alphas": alphas,
        "union": union,
    }))
    return path


def test_parse_fixture_spec():
    assert parse_fixture_spec("quadratic:k=8,eps=0.05") == ("quadratic", {"k": "8", "eps": "0.05"})
    assert parse_fixture_spec("cube") == ("cube", {})
    with pytest.raises(ConfigError):
        parse_fixture_spec("flower:n")


def test_exit_codes():
    assert exit_code_for(ConvergenceError("x")) == 2
    assert exit_code_for(VerificationError("x")) == 3
    assert exit_code_for(ResolutionError("x")) == 3
    assert exit_code_for(GeometryError("x")) == 1


def test_run_config_sources(tmp_path):
    with pytest.raises(ValueError):
        RunConfig(command="diagram")
    with pytest.raises(ValueError):
        RunConfig(command="diagram", input=tmp_path / "missing.json")
    f = tmp_path / "q.json"
    f.write_text("{}")
    with pytest.raises(ValueError):
        RunConfig(command="diagram", input=f, fixture="cube")
    with pytest.raises(ValueError):
        RunConfig(command="verify", solution=f)
    RunConfig(command="verify", solution=f, problem=f)
    config = RunConfig(command="solve", input=f, tol=1e-4, threads=2)
    config.apply()
    assert settings.solver_tol == 1e-4
    assert settings.threads == 2


def test_fixture_then_diagram(tmp_path, capsys):
    out = tmp_path / "cube.json"
    assert run(["fixture", "cube", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["points"]) == 7
    capsys.readouterr()

    diagram_json = tmp_path / "diagram.json"
    assert run(["diagram", "--in", str(out), "--kind", "pi", "--out", str(diagram_json)]) == 0
    captured = capsys.readouterr()
    assert "quantity" in captured.out
    record = telemetry(captured.err)[-1]
    assert record["command"] == "diagram"
    assert (record["V"], record["E"], record["F"]) == (0, 6, 7)
    assert diagram_json.exists()


def test_fixture_prints_quadrics(capsys):
    assert run(["fixture", "equator:t=3;-2;1/2"]) == 0
    out = capsys.readouterr().out
    start = out.index("{")
    doc = json.loads(out[start:out.rindex("}") + 1])
    assert doc["kind"] == "pi"
    assert len(doc["quadrics"]) == 9


def test_fixture_kind_mismatch(capsys):
    assert run(["fixture", "equator", "--kind", "ei"]) == 1
    assert "error" in capsys.readouterr().err


def test_bad_sources(tmp_path, capsys):
    assert run(["diagram", "--in", str(tmp_path / "nope.json")]) == 1
    f = tmp_path / "q.json"
    f.write_text("{}")
    assert run(["diagram", "--in", str(f), "--fixture", "cube"]) == 1
    assert run(["diagram"]) == 1
    assert run(["diagram", "--fixture", "teapot"]) == 1
    err = capsys.readouterr().err
    assert "file not found" in err
    assert "unknown fixture" in err


def test_bad_json_is_an_input_error(tmp_path, capsys):
    f = tmp_path / "broken.json"
    f.write_text('{"kind": "pi",\n "quadrics": [}')
    assert run(["diagram", "--in", str(f)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_verify_cube_fixture(capsys):
    assert run(["verify", "--fixture", "cube", "--samples", "4000"]) == 0
    records = telemetry(capsys.readouterr().err)
    names = {r["check"] for r in records if r.get("command") == "verify"}
    assert {"membership", "fixture"} <= names
    assert all(r["passed"] for r in records if r.get("command") == "verify")


def test_verify_random_quadrics(capsys):
    assert run(["verify", "--fixture", "random:n=20,kind=pi", "--samples", "3000", "--seed", "4"]) == 0
    names = {r["check"] for r in telemetry(capsys.readouterr().err) if r.get("command") == "verify"}
    assert names == {"reduction", "membership", "planar_counts"}


def test_solve_and_verify_solution(tmp_path, capsys):
    problem = write_problem(tmp_path / "problem.json", [0.3, 0.7])
    solution = tmp_path / "solution.json"
    obj = tmp_path / "reflector.obj"
    code = run(["solve", "--in", str(problem), "--out", str(solution), "--obj", str(obj),
                "--mesh-res", "2", "--tol", "1e-5", "--arc-tol", "0.02"])
    assert code == 0
    captured = capsys.readouterr()
    assert "converged: True" in captured.out
    record = telemetry(captured.err)[-1]
    assert record["command"] == "solve" and record["N"] == 2
    assert json.loads(solution.read_text())["converged"] is True
    assert obj.stat().st_size > 0

    assert run(["verify", "--problem", str(problem), "--solution", str(solution),
                "--samples", "50000", "--seed", "1"]) == 0


def test_solve_not_converged(tmp_path, capsys):
    problem = write_problem(tmp_path / "problem.json", [0.1, 0.9])
    code = run(["solve", "--in", str(problem), "--tol", "1e-12", "--max-iter", "1", "--arc-tol", "0.02"])
    assert code == 2
    assert "did not reach tolerance" in capsys.readouterr().err


def test_solve_from_image(tmp_path, capsys):
    grid = tmp_path / "target.txt"
    grid.write_text("1 1\n1 1\n")
    out = tmp_path / "solution.json"
    code = run(["solve", "--image", str(grid), "--cap-angle", "0.5", "--out", str(out),
                "--tol", "1e-4", "--arc-tol", "0.02"])
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["lambda"]) == 4


def test_image_fixture_writes_a_problem(tmp_path, capsys):
    grid = tmp_path / "target.txt"
    grid.write_text("0 2\n1 1\n")
    out = tmp_path / "problem.json"
    assert run(["fixture", f"image:path={grid},cap=0.5", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["directions"]) == 3
    assert doc["density"]["type"] == "uniform_hemisphere"
    assert sum(doc["alphas"]) == pytest.approx(1.0)
    assert run(["fixture", "image"]) == 1
    assert "path=" in capsys.readouterr().err


def test_log_records_go_to_stderr(tmp_path, capsys):
    settings.log_dir = tmp_path
    logger = get_logger("confocal_diagrams.tests.console")
    logger.warning("diagram built")
    captured = capsys.readouterr()
    assert "diagram built" in captured.err
    assert "diagram built" not in captured.out
