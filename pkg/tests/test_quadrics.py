from fractions import Fraction

import numpy as np
import pytest

from confocal_diagrams.core.exceptions import GeometryError, InputFormatError
from confocal_diagrams.quadrics import (
    DiagramKind,
    Ellipsoid,
    Paraboloid,
    direction_from_stereographic,
    ellipsoids_from_weighted_points,
    envelope,
    focal_projection,
    invert_focal_map,
    is_generic,
    quadrics_to_points,
    radial,
    radial_matrix,
    rational_direction,
    to_weighted_point,
)
from confocal_diagrams.quadrics.io import load_quadrics, parse_point_document, parse_quadric_document, read_json, save_quadrics

from conftest import axis_paraboloids, site, unit


def test_kind_parsing():
    assert DiagramKind.parse(" PI ") is DiagramKind.PARABOLOID_INTERSECTION
    assert DiagramKind.parse("eu").is_union and DiagramKind.parse("eu").is_ellipsoid
    with pytest.raises(ValueError):
        DiagramKind.parse("xx")


def test_value_types_validate():
    with pytest.raises(GeometryError):
        unit(1, 1, 0)
    with pytest.raises(GeometryError):
        Paraboloid(unit(0, 0, 1), 0)
    with pytest.raises(GeometryError):
        Ellipsoid(unit(0, 0, 1), 1, 1)
    e = Ellipsoid(unit(1, 0, 0), 2, Fraction(1, 2))
    assert e.d == Fraction(3, 2)  # m(1 − e²)/(2e)


def test_pi_point_of_north_paraboloid():
    p = to_weighted_point(Paraboloid(unit(0, 0, 1), 1), "pi")
    assert p.position == (0, 0, Fraction(-1, 2))
    assert p.weight == Fraction(-5, 4)
    with pytest.raises(GeometryError):
        to_weighted_point(Paraboloid(unit(0, 0, 1), 1), "ei")


@pytest.mark.parametrize("kind", ["pi", "pu"])
def test_paraboloid_power_is_monotone_in_radius(kind):
    quadrics = [Paraboloid(unit(0, 0, 1), 2), Paraboloid(unit(Fraction(3, 5), Fraction(4, 5), 0), Fraction(1, 3))]
    kind = DiagramKind.parse(kind)
    points = quadrics_to_points(quadrics, kind)
    u = direction_from_stereographic(Fraction(1, 7), Fraction(-2, 3)).y
    sign = 1 if kind.is_union else -1
    for q, p in zip(quadrics, points):
        assert p.power(u) == 1 + sign / radial(q, u)


@pytest.mark.parametrize("kind", ["ei", "eu"])
def test_ellipsoid_power_is_monotone_in_radius(kind):
    quadrics = [
        Ellipsoid(unit(0, 0, 1), 2, Fraction(1, 2)),
        Ellipsoid(unit(0, Fraction(-5, 13), Fraction(12, 13)), Fraction(1, 3), Fraction(3, 4)),
    ]
    kind = DiagramKind.parse(kind)
    points = quadrics_to_points(quadrics, kind)
    u = direction_from_stereographic(Fraction(5, 2), Fraction(1, 9)).y
    sign = 1 if kind.is_union else -1
    for q, p in zip(quadrics, points):
        assert p.power(u) == 1 + sign / radial(q, u)


def test_envelopes_pick_lowest_and_highest():
    quadrics = axis_paraboloids()
    u = np.array([[0.0, 0.0, 1.0], [0.6, 0.8, 0.0]])
    values = radial_matrix(quadrics, u)
    assert np.isinf(values[0, 4])  # pole of +e_z
    assert values[0, 5] == pytest.approx(0.5)
    low = envelope(quadrics, DiagramKind.PARABOLOID_INTERSECTION, u)
    high = envelope(quadrics, DiagramKind.PARABOLOID_UNION, u)
    assert low[0] == pytest.approx(0.5)
    assert np.isinf(high[0])
    assert low[1] == pytest.approx(1.0 / 1.8)


def test_ellipsoids_from_weighted_points_keep_the_power_diagram():
    points = [site(2, 0, 0, 0, 0), site(0, 0, 1, 0, 1), site(0, Fraction(3, 5), Fraction(4, 5), 1, 2)]
    for kind in (DiagramKind.ELLIPSOID_INTERSECTION, DiagramKind.ELLIPSOID_UNION):
        ellipsoids = ellipsoids_from_weighted_points(points, kind)
        assert all(0 < q.eccentricity < 1 for q in ellipsoids)
        back = quadrics_to_points(ellipsoids, kind)
        assert [b.position for b in back] == [p.position for p in points]
        shifts = {b.weight - p.weight for b, p in zip(back, points)}
        assert len(shifts) == 1


def test_inverse_map_rejects_origin_and_paraboloid_kinds():
    with pytest.raises(GeometryError):
        ellipsoids_from_weighted_points([site(0, 0, 0)])
    with pytest.raises(GeometryError):
        ellipsoids_from_weighted_points([site(1, 0, 0)], "pi")
    assert ellipsoids_from_weighted_points([]) == []


def test_inverse_map_approximates_irrational_norms():
    points = [site(1, 1, 0, 0, 0), site(-1, 2, 1, 0, 1)]
    ellipsoids = ellipsoids_from_weighted_points(points)
    back = quadrics_to_points(ellipsoids, "ei")
    for b, p in zip(back, points):
        assert np.allclose([float(c) for c in b.position], [float(c) for c in p.position], atol=1e-9)


def test_stereographic_and_rational_directions_are_exact_units():
    d = direction_from_stereographic(Fraction(2, 3), Fraction(-1, 5))
    assert sum(c * c for c in d.y) == 1
    v = np.array([0.3, -0.2, 0.9])
    r = rational_direction(v)
    assert sum(c * c for c in r.y) == 1
    assert np.allclose(r.array, v / np.linalg.norm(v), atol=1e-12)


def test_focal_projection_inverts():
    base = Paraboloid(unit(0, 0, 1), 1)
    other = Paraboloid(unit(Fraction(3, 5), 0, Fraction(-4, 5)), 2)
    disc = focal_projection(base, other)
    assert disc.radius2 > 0
    assert invert_focal_map(base, disc) == other
    with pytest.raises(GeometryError):
        focal_projection(base, Paraboloid(unit(0, 0, 1), 3))


def test_antipodal_focal_projection_is_centered():
    base = Paraboloid(unit(0, 0, 1), 1)
    disc = focal_projection(base, Paraboloid(unit(0, 0, -1), 1))
    assert disc.center3 == (0, 0, 0)
    assert disc.radius2 == 1  # 4λμ / ‖y − z‖²


def test_genericity():
    # ±e_x and ±e_y with equal focal distances all pass through ±e_z
    ring = axis_paraboloids()[:4]
    assert not is_generic(ring)
    skewed = [
        Paraboloid(unit(1, 0, 0), 1),
        Paraboloid(unit(0, 1, 0), 2),
        Paraboloid(unit(0, 0, 1), 3),
        Paraboloid(unit(Fraction(-3, 5), 0, Fraction(-4, 5)), 5),
    ]
    assert is_generic(skewed)


def test_quadric_document_parsing(tmp_path):
    doc = {"kind": "pi", "quadrics": [{"y": [0, 0, 1], "lambda": "1/2"}, {"y": ["0.6", "0.8", 0], "lambda": [3, 2]}]}
    kind, quadrics = parse_quadric_document(doc)
    assert kind is DiagramKind.PARABOLOID_INTERSECTION
    assert quadrics[0].focal == Fraction(1, 2)
    assert quadrics[1].direction.y == (Fraction(3, 5), Fraction(4, 5), 0)
    assert quadrics[1].focal == Fraction(3, 2)

    path = tmp_path / "family.json"
    save_quadrics(path, kind, quadrics)
    assert load_quadrics(path) == (kind, quadrics)


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "pi", "quadrics": [{"y": [0, 0, 1.0], "lambda": 1}]},
        {"kind": "pi", "quadrics": [{"y": [0, 1, 1], "lambda": 1}]},
        {"kind": "ei", "quadrics": [{"y": [0, 0, 1], "lambda": 1}]},
        {"kind": "pi", "quadrics": [{"y": [0, 0, 1], "lambda": -1}]},
        {"kind": "xx", "quadrics": []},
    ],
)
def test_bad_quadric_documents(doc):
    with pytest.raises(InputFormatError):
        parse_quadric_document(doc)


def test_point_document_defaults_indices():
    points = parse_point_document({"points": [{"p": [0, 0, 0], "w": 1}, {"p": ["1/2", 0, 0], "w": "-0.25"}]})
    assert [p.index for p in points] == [0, 1]
    assert points[1].weight == Fraction(-1, 4)


def test_read_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "pi",\n "quadrics": [}', encoding="utf-8")
    with pytest.raises(InputFormatError) as info:
        read_json(path)
    assert info.value.details["line"] == 2
    with pytest.raises(InputFormatError):
        read_json(tmp_path / "missing.json")
