"""Shared helpers for the test suite."""
from fractions import Fraction

import pytest

from confocal_diagrams.core.settings import settings
from confocal_diagrams.power.weighted_point import WeightedPoint
from confocal_diagrams.quadrics.types import Paraboloid, UnitDirection


def unit(x, y, z) -> UnitDirection:
    return UnitDirection((Fraction(x), Fraction(y), Fraction(z)))


def site(x, y, z, w=0, index=0) -> WeightedPoint:
    return WeightedPoint((Fraction(x), Fraction(y), Fraction(z)), Fraction(w), index)


def axis_paraboloids(focal=1) -> list[Paraboloid]:
    """Paraboloids along ±e_x, ±e_y, ±e_z."""
    out = []
    for k in range(3):
        for s in (1, -1):
            v = [0, 0, 0]
            v[k] = s
            out.append(Paraboloid(unit(*v), focal))
    return out


@pytest.fixture(autouse=True)
def restore_settings():
    """CLI runs mutate the shared settings; put them back after every test."""
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)
