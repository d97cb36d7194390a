import math

import numpy as np
import pytest
from pydantic import TypeAdapter, ValidationError

from confocal_diagrams.core.exceptions import InputFormatError
from confocal_diagrams.measure import (
    Constant,
    GridDensity,
    QuadratureRule,
    SphericalTessellation,
    UniformHemisphere,
    cell_cost_integral,
    cell_integrals,
    cell_mass,
    clip_halfspace,
    diagram_integrals,
    integrate_sphere,
    integrate_triangles,
    read_pgm,
    sphere_tessellation,
    tessellate_cell,
    transport_cost,
)
from confocal_diagrams.measure.densities import DensitySpec, GridSpec
from confocal_diagrams.measure.quadrature import triangle_determinants
from confocal_diagrams.measure.tessellation import refine_geodesic
from confocal_diagrams.oracle import fixture_cube, random_quadrics, sample_envelope
from confocal_diagrams.quadrics import Paraboloid
from confocal_diagrams.sphere import build_diagram, diagram_of_quadrics

from conftest import axis_paraboloids, unit

NORTH = np.array([0.0, 0.0, 1.0])


@pytest.fixture(scope="module")
def antipodal():
    quadrics = [Paraboloid(unit(0, 0, 1), 1), Paraboloid(unit(0, 0, -1), 1)]
    return diagram_of_quadrics(quadrics, "pi")


# ---------------- quadrature ----------------

def test_dunavant_rule_shape():
    rule = QuadratureRule.dunavant6(depth=1)
    assert len(rule) == 12
    assert rule.order == 6 and rule.depth == 1
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rule.barycentric.sum(axis=1), 1.0)
    assert rule.with_depth(3).depth == 3


def test_octant_area():
    octant = np.eye(3)[None, :, :]
    assert integrate_triangles(octant, lambda u: np.ones(len(u))) == pytest.approx(math.pi / 2, abs=1e-7)


def test_sphere_moments():
    assert integrate_sphere(lambda u: np.ones(len(u))) == pytest.approx(4 * math.pi, abs=1e-9)
    assert integrate_sphere(lambda u: u[:, 2] ** 2) == pytest.approx(4 * math.pi / 3, abs=1e-9)
    assert integrate_sphere(lambda u: u[:, 0] * u[:, 1]) == pytest.approx(0.0, abs=1e-12)


def test_transport_cost_is_finite_at_the_pole():
    u = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    c = transport_cost(u, NORTH)
    assert np.isfinite(c).all()
    assert c[1] == pytest.approx(-math.log(2.0))


# ---------------- tessellation ----------------

def test_whole_sphere_tessellation():
    tess = sphere_tessellation()
    assert len(tess) == 8 * 4**3
    assert tess.solid_angle == pytest.approx(4 * math.pi, abs=1e-10)
    assert (triangle_determinants(tess.triangles) > 0).all()


@pytest.mark.parametrize("axis", [[0, 0, 1], [1, 1, 1], [0.3, -2.0, 0.1]])
def test_hemisphere_clipping(axis):
    tess = sphere_tessellation().clipped(np.array(axis, dtype=float))
    assert tess.solid_angle == pytest.approx(2 * math.pi, abs=1e-9)
    a = np.asarray(axis, dtype=float)
    assert (tess.triangles @ a >= -1e-12).all()


def test_clip_of_nothing():
    assert clip_halfspace(np.zeros((0, 3, 3)), NORTH).shape == (0, 3, 3)


def test_cap_and_holed_cell_areas():
    diagram = build_diagram(fixture_cube().points)
    center = tessellate_cell(diagram[0])
    assert center.solid_angle == pytest.approx(8 * math.pi / 5, abs=1e-4)
    for k in range(1, 7):
        assert tessellate_cell(diagram[k]).solid_angle == pytest.approx(2 * math.pi / 5, abs=1e-4)


def test_hemisphere_cells(antipodal):
    for cell in antipodal:
        tess = tessellate_cell(cell)
        assert tess.solid_angle == pytest.approx(2 * math.pi, abs=1e-4)
        assert (triangle_determinants(tess.triangles) >= 0).all()
        assert tess.max_deviation > 0


@pytest.mark.parametrize("max_angle", [0.25, 0.12, 0.6])
def test_piece_seams_lose_no_area(antipodal, max_angle):
    # the equator is a great circle, so only seam gaps could change the area
    for cell in antipodal:
        tess = tessellate_cell(cell, max_angle=max_angle)
        assert tess.solid_angle == pytest.approx(2 * math.pi, abs=1e-9)
        edges = np.linalg.norm(tess.triangles - np.roll(tess.triangles, 1, axis=1), axis=2)
        assert edges.max() <= 2 * math.sin(max_angle / 2) + 1e-12


def test_geodesic_refinement_keeps_the_triangle():
    octant = np.eye(3)[None, :, :]
    tris = refine_geodesic(octant, 0.3)
    edges = np.linalg.norm(tris - np.roll(tris, 1, axis=1), axis=2)
    assert edges.max() <= 2 * math.sin(0.15)
    assert (triangle_determinants(tris) > 0).all()
    assert np.allclose(np.linalg.norm(tris, axis=2), 1.0)
    assert SphericalTessellation(tris).solid_angle == pytest.approx(math.pi / 2, abs=1e-12)
    assert len(refine_geodesic(octant, 2.0)) == 1


# ---------------- densities ----------------

def test_constant_and_hemisphere_densities():
    c = Constant()
    assert c.total_mass() == pytest.approx(1.0)
    with pytest.raises(InputFormatError):
        Constant(-1.0)
    h = UniformHemisphere()
    values = h(np.array([[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]))
    assert values[0] == pytest.approx(1 / (2 * math.pi)) and values[1] == 0.0
    with pytest.raises(InputFormatError):
        UniformHemisphere((0, 0, 0))


def test_grid_density_normalizes_and_orients():
    flat = GridDensity(np.ones((8, 16)))
    u = np.array([[0.0, 0.0, 1.0], [0.6, 0.0, -0.8], [-1.0, 0.0, 0.0]])
    assert np.allclose(flat(u), 1 / (4 * math.pi), rtol=1e-8)
    assert integrate_sphere(flat) == pytest.approx(1.0, abs=1e-9)

    north_only = GridDensity(np.array([[1.0, 1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 0.0]]))
    assert north_only(NORTH[None, :])[0] > 0
    assert north_only(-NORTH[None, :])[0] == 0
    raw = GridDensity(np.full((4, 4), 2.0), normalization="none")
    assert raw.total_mass() == pytest.approx(8 * math.pi, rel=1e-8)

    with pytest.raises(InputFormatError):
        GridDensity(np.zeros((4, 4)))
    with pytest.raises(InputFormatError):
        GridDensity(np.array([[1.0, -1.0]]))


def test_density_specs():
    adapter = TypeAdapter(DensitySpec)
    assert isinstance(adapter.validate_python({"type": "constant"}).build(), Constant)
    hemi = adapter.validate_python({"type": "uniform_hemisphere", "axis": [0, 0, 2]}).build()
    assert np.allclose(hemi.support_axis, NORTH)
    grid = adapter.validate_python({"type": "grid", "rows": 1, "cols": 2, "values": [1, 1]}).build()
    assert grid.total_mass() == 1.0
    with pytest.raises(ValidationError):
        GridSpec(rows=2, cols=2, values=[1.0])
    spec = UniformHemisphere().to_spec()
    assert spec.axis == [0.0, 0.0, -1.0]


def test_read_pgm(tmp_path):
    ascii_pgm = tmp_path / "a.pgm"
    ascii_pgm.write_text("P2\n# comment\n3 2\n255\n0 51 255\n255 0 0\n")
    grid = read_pgm(ascii_pgm)
    assert grid.shape == (2, 3)
    assert grid[0, 1] == pytest.approx(0.2)

    binary_pgm = tmp_path / "b.pgm"
    binary_pgm.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 10, 20]))
    grid = read_pgm(binary_pgm)
    assert grid[0, 1] == 1.0 and grid[1, 0] == pytest.approx(10 / 255)

    bad = tmp_path / "c.pgm"
    bad.write_bytes(b"P6\n1 1\n255\n" + bytes([0, 0, 0]))
    with pytest.raises(InputFormatError):
        read_pgm(bad)


# ---------------- cell integrals ----------------

def test_whole_sphere_cost():
    diagram = diagram_of_quadrics([Paraboloid(unit(0, 0, 1), 1)], "pi")
    result = cell_integrals(diagram[0], NORTH, Constant())
    assert result.mass == pytest.approx(1.0, abs=1e-9)
    assert result.cost == pytest.approx(1 - math.log(2.0), abs=1e-4)


def test_hemisphere_costs(antipodal):
    # cell 1 is the northern half and contains the singular point
    assert cell_cost_integral(antipodal[1], NORTH, Constant()) == pytest.approx(0.5, abs=1e-4)
    assert cell_cost_integral(antipodal[0], NORTH, Constant()) == pytest.approx(0.5 - math.log(2.0), abs=1e-4)
    assert cell_mass(antipodal[0], Constant()) == pytest.approx(0.5, abs=1e-6)
    assert cell_mass(antipodal[0], UniformHemisphere()) == pytest.approx(1.0, abs=1e-6)
    assert cell_mass(antipodal[1], UniformHemisphere()) == pytest.approx(0.0, abs=1e-12)


def test_cube_masses():
    diagram = build_diagram(fixture_cube().points)
    masses, costs = diagram_integrals(diagram, Constant())
    assert masses == pytest.approx([0.4] + [0.1] * 6, abs=1e-4)
    # the caps and the holed center share their sampled arcs
    assert masses.sum() == pytest.approx(1.0, abs=1e-9)
    assert not costs.any()


def test_axis_cells_under_lower_hemisphere():
    diagram = diagram_of_quadrics(axis_paraboloids(), "pi")
    masses, _ = diagram_integrals(diagram, UniformHemisphere())
    # +e_z opens upward, so its cell is the face around −e_z
    assert masses == pytest.approx([1 / 6] * 4 + [1 / 3, 0.0], abs=1e-5)


def test_masses_match_sampling():
    quadrics = random_quadrics(12, "pi", seed=2)
    diagram = diagram_of_quadrics(quadrics, "pi")
    masses, _ = diagram_integrals(diagram, Constant(), threads=2)
    assert masses.sum() == pytest.approx(1.0, abs=1e-9)
    sampled = sample_envelope(quadrics, diagram.kind, 200_000, seed=3, method="uniform")
    assert np.abs(masses - sampled.masses).max() < 6e-3


def test_integrals_do_not_depend_on_threads():
    diagram = diagram_of_quadrics(random_quadrics(10, "pu", seed=8), "pu")
    ys = [q.direction.array for q in random_quadrics(10, "pu", seed=8)]
    one = diagram_integrals(diagram, Constant(), ys, threads=1)
    many = diagram_integrals(diagram, Constant(), ys, threads=4)
    assert np.array_equal(one[0], many[0]) and np.array_equal(one[1], many[1])
