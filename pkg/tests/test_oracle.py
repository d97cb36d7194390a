import math
from fractions import Fraction

import numpy as np
import pytest

from confocal_diagrams.core.exceptions import FixtureParameterError, ResolutionError
from confocal_diagrams.core.settings import settings
from confocal_diagrams.oracle import (
    MIN_FEATURE_PIXELS,
    AgreementReport,
    Window,
    build_fixture,
    check_fixture_expectations,
    check_flower,
    check_reduction,
    disc_arrangement_components,
    disc_gaps,
    equator_cycle,
    fibonacci_sphere,
    fixture_cube,
    fixture_equator,
    fixture_flower,
    fixture_quadratic_ellipsoids,
    flower_discs,
    lower_hemisphere_directions,
    narrowest_gap,
    random_quadrics,
    sample_directions,
    targets_from_image,
)
from confocal_diagrams.oracle.fixtures import max_quadratic_eps
from confocal_diagrams.sphere import build_diagram, diagram_of_quadrics


# ---------------- sampling ----------------

def test_fibonacci_lattice_is_unit_and_balanced():
    u = fibonacci_sphere(1000)
    assert u.shape == (1000, 3)
    assert np.allclose(np.linalg.norm(u, axis=1), 1.0)
    assert abs(u.mean(axis=0)).max() < 5e-3


def test_uniform_samples_follow_the_seed():
    a = sample_directions(100, "uniform", seed=3)
    b = sample_directions(100, "uniform", seed=3)
    assert np.array_equal(a, b)
    with pytest.raises(ValueError):
        sample_directions(0)


def test_agreement_report_rate():
    report = AgreementReport(samples=10, uncertain=2, agreed=8)
    assert report.checked == 8
    assert report.rate == 1.0
    assert report.as_dict()["uncertain"] == 2
    assert AgreementReport(5, 5, 0).rate == 1.0


@pytest.mark.parametrize("kind", ["pi", "pu", "ei", "eu"])
def test_reduction_agrees_with_envelope(kind):
    result = check_reduction(random_quadrics(30, kind, seed=3), kind, 5000)
    assert result.passed, result.details
    assert result.details["rate"] == 1.0


# ---------------- disc arrangements ----------------

def test_disc_components():
    assert disc_arrangement_components([]) == 1
    assert disc_arrangement_components([(0.0, 0.0, 1.0), (5.0, 0.0, 1.0)]) == 1
    # four overlapping discs around the origin enclose one hole
    ring = [(1.0, 0.0, 0.8), (0.0, 1.0, 0.8), (-1.0, 0.0, 0.8), (0.0, -1.0, 0.8)]
    assert disc_arrangement_components(ring) == 2


def test_disc_components_raise_when_unresolved():
    with pytest.raises(ResolutionError):
        disc_arrangement_components([(0.0, 0.0, 0.001)], window=Window(-1.0, -1.0, 1.0, 1.0),
                                    resolution=64, max_resolution=128)


def test_cusp_slivers_are_not_components():
    # two discs crossing at a shallow angle leave thin wedges along the crossing
    discs = [(0.0, 0.0, 1.0), (1.999, 0.0, 1.0), (0.9995, 0.0, 0.06)]
    assert disc_arrangement_components(discs) == 1


def test_ring_gap_sets_the_feature_size():
    ring = [(1.0, 0.0, 0.8), (0.0, 1.0, 0.8), (-1.0, 0.0, 0.8), (0.0, -1.0, 0.8)]
    gaps = disc_gaps(ring)
    assert len(gaps) == 1
    assert narrowest_gap(ring) == pytest.approx(0.4, abs=1e-3)
    assert narrowest_gap([(0.0, 0.0, 1.0)]) == math.inf


@pytest.mark.parametrize("n", [3, 5, 8, 12])
def test_flower_discs_leave_one_gap_per_petal(n):
    discs = flower_discs(n)
    assert len(discs) == n + 1
    assert len(disc_gaps(discs)) == n
    assert disc_arrangement_components(discs) == n + 1


@pytest.mark.parametrize("n", [3, 5, 8, 12, 24])
def test_flower_gaps_are_wider_than_the_raster_feature(n):
    discs = flower_discs(n)
    window = Window.around([(*d.center, d.radius) for d in discs])
    pixel = window.size / settings.oracle_resolution
    assert narrowest_gap(discs) >= 2 * MIN_FEATURE_PIXELS * pixel


def test_flower_needs_three_petals():
    with pytest.raises(FixtureParameterError):
        flower_discs(2)


@pytest.mark.slow
def test_flower_base_cell_components():
    fx = fixture_flower(5)
    assert fx.expected["base_components"] == 6
    diagram = diagram_of_quadrics(fx.quadrics, fx.kind)
    result = check_flower(fx, diagram)
    assert result.passed, result.details


# ---------------- fixtures ----------------

def test_equator_winners_follow_parameter_order():
    ts = [Fraction(3), Fraction(-2), Fraction(1, 2), Fraction(-1, 3)]
    fx = fixture_equator(ts)
    n = len(ts)
    assert fx.expected["poles"] == [n + 4, n + 5]
    cycle = [w for w in equator_cycle(fx.quadrics, 20_000) if w < n]
    order = fx.expected["order"]
    assert sorted(cycle) == sorted(order)
    start = cycle.index(order[0])
    assert cycle[start:] + cycle[:start] == order


@pytest.mark.parametrize("ts", [[0, 2], [1, 3], [-1, 3], [2, 2], []])
def test_equator_rejects_axis_and_repeated_parameters(ts):
    with pytest.raises(FixtureParameterError):
        fixture_equator(ts)


def test_quadratic_fixture_has_quadratically_many_arcs():
    k = 4
    fx = fixture_quadratic_ellipsoids(k)
    assert len(fx.quadrics) == 2 * k
    assert fx.expected["min_arcs"] == k * k
    diagram = diagram_of_quadrics(fx.quadrics, fx.kind)
    result = check_fixture_expectations(fx, diagram)
    assert result.passed, result.details


def test_quadratic_fixture_bounds():
    assert 0 < max_quadratic_eps(8) < max_quadratic_eps(4) < 1
    with pytest.raises(FixtureParameterError):
        fixture_quadratic_ellipsoids(4, 0.99)
    with pytest.raises(FixtureParameterError):
        fixture_quadratic_ellipsoids(1)


def test_cube_fixture_expectations():
    fx = fixture_cube()
    result = check_fixture_expectations(fx, build_diagram(fx.points))
    assert result.passed, result.details
    with pytest.raises(FixtureParameterError):
        fixture_cube(Fraction(3))


def test_build_fixture_by_name():
    assert build_fixture("equator").params["t"] == ["3", "-2", "1/2"]
    assert build_fixture("cube", {"offset": "3/2"}).params["offset"] == "3/2"
    fx = build_fixture("random", {"n": "12", "kind": "eu"}, seed=2)
    assert len(fx.quadrics) == 12
    assert fx.kind.value == "eu"
    with pytest.raises(FixtureParameterError):
        build_fixture("teapot")


def test_lower_hemisphere_directions_are_distinct():
    dirs = lower_hemisphere_directions(20, seed=5)
    assert len(set(dirs)) == 20
    assert all(d.y[2] < 0 for d in dirs)


# ---------------- image targets ----------------

def test_targets_from_image():
    grid = np.array([[0.0, 1.0, 2.0], [3.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    cap = math.pi / 4
    directions, alphas = targets_from_image(grid, cap_angle=cap)
    assert len(directions) == 6
    assert math.fsum(alphas) == pytest.approx(1.0, abs=1e-15)
    assert alphas[2] == pytest.approx(3.0 / 9.0)
    for d in directions:
        assert sum(c * c for c in d.y) == 1
        assert float(d.y[2]) > math.cos(cap)
    assert len(set(directions)) == 6


def test_targets_from_image_errors():
    with pytest.raises(FixtureParameterError):
        targets_from_image(np.zeros((2, 2)))
    with pytest.raises(FixtureParameterError):
        targets_from_image(-np.ones((2, 2)))
    with pytest.raises(FixtureParameterError):
        targets_from_image(np.ones((2, 2)), cap_angle=4.0)

