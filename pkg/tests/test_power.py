import json
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from confocal_diagrams.core.exceptions import CoincidentSitesError, DegenerateSimplexError, GeometryError
from confocal_diagrams.kernel import rationalize
from confocal_diagrams.power import (
    RidgeKind,
    build_triangulation,
    dual_vertex,
    facets_of_cell,
    power_side,
    radical_plane,
    reindex,
    weighted_circumcenter,
    write_triangulation_json,
)

from conftest import site


def tetrahedron():
    return reindex([site(0, 0, 0), site(1, 0, 0), site(0, 1, 0), site(0, 0, 1)])


def finite_volume(tri) -> float:
    total = 0.0
    for c in tri.finite_cells():
        p = np.array([tri.sites[v].as_floats()[:3] for v in tri.cells[c]])
        total += abs(np.linalg.det(p[1:] - p[0])) / 6.0
    return total


def test_radical_plane_sides():
    a, b = site(0, 0, 0, 0, 0), site(2, 0, 0, 0, 1)
    n, h = radical_plane(a, b)
    assert n == (2, 0, 0)
    assert h == 2  # ⟨n, x⟩ = 2 at x = 1
    heavy = site(2, 0, 0, 4, 1)
    _, h = radical_plane(a, heavy)
    assert h == 4  # the heavier site pushes the plane to x = 2
    with pytest.raises(CoincidentSitesError):
        radical_plane(a, site(0, 0, 0, 1, 1))


def test_weighted_circumcenter_has_equal_power():
    sites = [site(0, 0, 0, 0), site(2, 0, 0, 1), site(0, 3, 0, -1), site(1, 1, 2, 0)]
    x = dual_vertex(sites)
    powers = {s.power(x) for s in sites}
    assert len(powers) == 1
    edge = weighted_circumcenter(sites[:2])
    assert sites[0].power(edge) == sites[1].power(edge)
    assert edge[1] == edge[2] == 0


def test_flat_simplex_raises():
    flat = [site(0, 0, 0), site(1, 0, 0), site(2, 0, 0), site(0, 1, 0)]
    with pytest.raises(DegenerateSimplexError):
        dual_vertex(flat)
    with pytest.raises(DegenerateSimplexError):
        power_side(flat, site(5, 5, 5))


def test_power_side_of_unweighted_tetrahedron():
    tet = tetrahedron()
    assert power_side(tet, site(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4))) == -1
    assert power_side(tet, site(5, 5, 5)) == 1
    assert power_side(tet, site(1, 1, 1)) == 0
    # a large weight lifts the query off the power sphere
    assert power_side(tet, site(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), 10)) == 1


def test_tetrahedron_triangulation():
    tri = build_triangulation(tetrahedron())
    s = tri.summary()
    assert s["dimension"] == 3
    assert s["finite_cells"] == 1
    assert s["infinite_cells"] == 4
    assert s["hidden"] == 0


def test_tetrahedron_facets_are_unbounded_wedges():
    tri = build_triangulation(tetrahedron())
    for v in range(4):
        cell = facets_of_cell(tri, v)
        assert not cell.hidden
        assert sorted(f.j for f in cell) == [u for u in range(4) if u != v]
        for f in cell:
            assert not f.bounded
            assert [r.kind for r in f.ridges] == [RidgeKind.RAY_IN, RidgeKind.RAY_OUT]


def test_heavy_center_is_hidden():
    pts = tetrahedron() + [site(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), 10, 4)]
    tri = build_triangulation(pts)
    assert tri.is_hidden(4)
    assert tri.vertices() == [0, 1, 2, 3]
    assert len(facets_of_cell(tri, 4)) == 0
    assert facets_of_cell(tri, 4).hidden


def test_light_center_becomes_interior_vertex():
    pts = tetrahedron() + [site(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), 0, 4)]
    tri = build_triangulation(pts)
    assert not tri.hidden
    assert len(tri.finite_cells()) == 4
    cell = facets_of_cell(tri, 4)
    assert all(f.bounded for f in cell)
    assert len(cell) == 4


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_cospherical_cube_is_triangulated(seed):
    corners = reindex([site(*c) for c in product((-1, 1), repeat=3)])
    tri = build_triangulation(corners, seed=seed)
    assert tri.dimension == 3
    assert finite_volume(tri) == pytest.approx(8.0)
    # every finite cell has its dual vertex at the common circumcenter
    for c in tri.finite_cells():
        assert tri.dual_vertex(c) == (0, 0, 0)


def test_random_triangulation_fills_hull():
    rng = np.random.default_rng(3)
    pts = [
        site(*(rationalize(float(c), 20) for c in xyz), rationalize(float(w), 20), k)
        for k, (xyz, w) in enumerate(zip(rng.uniform(-2, 2, size=(40, 3)), rng.uniform(-0.3, 0.3, size=40)))
    ]
    tri = build_triangulation(pts, seed=5)
    positions = np.array([p.as_floats()[:3] for p in pts])
    assert finite_volume(tri) == pytest.approx(ConvexHull(positions).volume, rel=1e-9)


def finite_cells(tri) -> list[tuple[int, ...]]:
    return sorted(tuple(sorted(tri.cells[c])) for c in tri.finite_cells())


def test_translation_and_weight_shift_keep_the_triangulation():
    rng = np.random.default_rng(11)
    pts = [
        site(*(rationalize(float(c), 20) for c in xyz), rationalize(float(w), 20), k)
        for k, (xyz, w) in enumerate(zip(rng.uniform(-2, 2, size=(30, 3)), rng.uniform(-0.5, 0.5, size=30)))
    ]
    shift = (Fraction(7, 3), Fraction(-1, 2), Fraction(5, 4))
    moved = [site(*(a + b for a, b in zip(p.position, shift)), p.weight, p.index) for p in pts]
    heavier = [site(*p.position, p.weight + Fraction(3, 2), p.index) for p in pts]
    reference = build_triangulation(pts, seed=2)
    for other in (build_triangulation(moved, seed=2), build_triangulation(heavier, seed=9)):
        assert finite_cells(other) == finite_cells(reference)
        assert other.hidden == reference.hidden


def test_planar_and_collinear_inputs():
    square = reindex([site(0, 0, 0), site(1, 0, 0), site(0, 1, 0), site(1, 1, 0)])
    tri = build_triangulation(square)
    assert tri.dimension == 2
    assert len(tri.finite_cells()) == 2

    line = reindex([site(0, 0, 0), site(1, 0, 0), site(3, 0, 0)])
    tri = build_triangulation(line)
    assert tri.dimension == 1
    assert [f.j for f in facets_of_cell(tri, 1)] == [0, 2]


def test_identical_positions_keep_the_lightest():
    pts = reindex([site(1, 0, 0, 3), site(1, 0, 0, -1), site(1, 0, 0, 2)])
    tri = build_triangulation(pts)
    assert tri.dimension == 0
    assert sorted(tri.hidden) == [0, 2]


def test_empty_and_duplicate_labels_rejected():
    with pytest.raises(GeometryError):
        build_triangulation([])
    with pytest.raises(GeometryError):
        build_triangulation([site(0, 0, 0, 0, 1), site(1, 0, 0, 0, 1)])


def test_triangulation_dump(tmp_path):
    pts = tetrahedron() + [site(Fraction(1, 4), Fraction(1, 4), Fraction(1, 4), 10, 4)]
    tri = build_triangulation(pts)
    path = tmp_path / "tri.json"
    write_triangulation_json(tri, path)
    data = json.loads(path.read_text())
    assert data["dimension"] == 3
    assert [s["hidden"] for s in data["sites"]] == [False] * 4 + [True]
    assert data["sites"][4]["weight"] == 10
    assert len(data["cells"]) == len(data["neighbors"]) == 5
    assert list(data["dual_vertices"].values()) == [["1/2", "1/2", "1/2"]]
