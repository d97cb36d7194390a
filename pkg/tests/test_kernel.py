from fractions import Fraction

import numpy as np
import pytest

from confocal_diagrams.kernel import (
    Interval,
    det,
    filter_stats,
    format_rational,
    parse_rational,
    rationalize,
    sign_filtered,
    solve_exact,
)
from confocal_diagrams.kernel.rational import sqrt_bounds


def test_parse_rational_forms():
    assert parse_rational("0.1") == Fraction(1, 10)
    assert parse_rational(" 3/4 ") == Fraction(3, 4)
    assert parse_rational(7) == 7
    assert parse_rational(0.5) == Fraction(1, 2)
    with pytest.raises(ValueError):
        parse_rational("three")
    with pytest.raises(ValueError):
        parse_rational(True)
    with pytest.raises(ValueError):
        parse_rational(float("nan"))


def test_format_rational():
    assert format_rational(Fraction(4, 2)) == 2
    assert format_rational(Fraction(-1, 3)) == "-1/3"


def test_rationalize_keeps_bits():
    assert rationalize(0.0) == 0
    assert rationalize(0.75) == Fraction(3, 4)
    q = rationalize(1.0 / 3.0, 20)
    assert abs(float(q) - 1.0 / 3.0) < 2.0 ** -20
    with pytest.raises(ValueError):
        rationalize(float("inf"))


def test_sqrt_bounds():
    lo, hi, exact = sqrt_bounds(Fraction(9, 4))
    assert exact and lo == hi == Fraction(3, 2)
    lo, hi, exact = sqrt_bounds(Fraction(2))
    assert not exact
    assert lo * lo < 2 < hi * hi


def test_interval_encloses_exact_value():
    third = Interval.of(Fraction(1, 3))
    assert third.contains(Fraction(1, 3))
    assert third.width > 0
    total = third + third + third
    assert total.contains(1)
    assert Interval.of(0.5).width == 0


def test_interval_sign_and_division():
    assert Interval(1.0, 2.0).sign() == 1
    assert Interval(-2.0, -1.0).sign() == -1
    assert Interval(0.0, 0.0).sign() == 0
    assert Interval(-1.0, 1.0).sign() is None
    wide = Interval(1.0, 1.0) / Interval(-1.0, 1.0)
    assert wide.lo == float("-inf") and wide.hi == float("inf")
    assert Interval(-3.0, 2.0).square().lo == 0.0


def test_sign_filtered_falls_back_on_cancellation():
    # (1/3)² − 1/9 is exactly zero but not as doubles
    expr = lambda a, b: a * a - b
    filter_stats.reset()
    assert sign_filtered(expr, Fraction(1, 3), Fraction(1, 9)) == 0
    assert filter_stats.snapshot() == {"calls": 1, "fallbacks": 1}
    assert sign_filtered(expr, Fraction(1, 2), Fraction(1, 9)) == 1
    assert filter_stats.snapshot()["fallbacks"] == 1


def orientation(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def test_sign_filtered_agrees_with_exact_sign_on_random_inputs():
    rng = np.random.default_rng(17)

    def rational():
        return Fraction(int(rng.integers(-1000, 1001)), int(rng.integers(1, 1000)))

    filter_stats.reset()
    tiny = Fraction(1, 10**30)
    for k in range(300):
        a = tuple(rational() for _ in range(3))
        b = tuple(rational() for _ in range(3))
        if k % 3 == 0:
            c = tuple(rational() for _ in range(3))
        else:
            # coplanar rows, optionally nudged far below double precision
            nudge = tiny if k % 3 == 1 else 0
            c = (a[0] + 3 * b[0] + nudge, a[1] + 3 * b[1], a[2] + 3 * b[2])
        expected = orientation(a, b, c)
        assert sign_filtered(orientation, a, b, c) == (expected > 0) - (expected < 0)
    stats = filter_stats.snapshot()
    assert stats["calls"] == 300
    assert 0 < stats["fallbacks"] < 300


def test_det_sizes():
    assert det([]) == 1
    assert det([[Fraction(5)]]) == 5
    eye = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    assert det(eye) == 1
    eye[3][3] = Fraction(-2)
    assert det(eye) == -2
    with pytest.raises(ValueError):
        det([[0] * 5 for _ in range(5)])


def test_solve_exact_regular_and_singular():
    sol = solve_exact([[2, 0], [0, 4]], [1, 1])
    assert sol.particular == (Fraction(1, 2), Fraction(1, 4))
    assert sol.rank_deficiency == 0

    assert solve_exact([[1, 1], [1, 1]], [0, 1]) is None

    # plane x + y + z = 1: closest point to the origin is (1/3, 1/3, 1/3)
    plane = solve_exact([[1, 1, 1]], [1])
    assert plane.rank_deficiency == 2
    assert plane.least_norm_point() == (Fraction(1, 3),) * 3
