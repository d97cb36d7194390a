"""
Deterministic test configurations with known structure.

Every fixture is regenerable from its name, parameters and seed, and
records the structural facts it is built to exhibit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..core.exceptions import FixtureParameterError
from ..core.logging_config import get_logger
from ..kernel.rational import rationalize
from ..power.weighted_point import WeightedPoint
from ..quadrics.focal import direction_from_stereographic, disc_from_frame, invert_focal_map, rational_direction
from ..quadrics.reductions import ellipsoids_from_weighted_points
from ..quadrics.types import DiagramKind, DiscSpec, Ellipsoid, Paraboloid, Quadric, UnitDirection

logger = get_logger(__name__)

NORTH = UnitDirection((Fraction(0), Fraction(0), Fraction(1)))


@dataclass
class Fixture:
    name: str
    kind: DiagramKind
    quadrics: list[Quadric] = field(default_factory=list)
    points: list[WeightedPoint] = field(default_factory=list)
    expected: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    discs: list[DiscSpec] = field(default_factory=list)


# ---------------- flower ----------------

def flower_discs(n_petals: int, base: UnitDirection = NORTH) -> list[DiscSpec]:
    """
    Unit center disc with `n_petals` petals around it. Adjacent petals
    overlap each other and the center, leaving one bounded gap between
    each pair.

    With s = π/n the gap spans s/2 along its bisector and the petal lens
    that closes it spans 2s/3, so both shrink with s at the same rate and
    stay several raster pixels wide at the default oracle resolution.
    """
    if n_petals < 3:
        raise FixtureParameterError("a flower needs at least 3 petals", {"n_petals": n_petals})
    s = math.pi / n_petals
    half_lens = s / 3.0
    # the petals meet on the bisector at radius 1 + s/2
    d = (1.0 + s / 2.0 + half_lens) / math.cos(s)
    r2 = rationalize((d * math.sin(s)) ** 2 + half_lens ** 2, 32)
    discs = [disc_from_frame(base, (0.0, 0.0), 1)]
    for k in range(n_petals):
        theta = 2.0 * k * s
        discs.append(disc_from_frame(base, (d * math.cos(theta), d * math.sin(theta)), r2, bits=32))
    return discs


def fixture_flower(n_petals: int, base_focal: Fraction = Fraction(1)) -> Fixture:
    """
    Paraboloids whose PU cell of the base direction is homeomorphic to the
    plane minus the flower discs: n_petals bounded gaps plus the outer region.
    """
    base = Paraboloid(NORTH, base_focal)
    discs = flower_discs(n_petals, NORTH)
    quadrics: list[Quadric] = [base] + [invert_focal_map(base, disc) for disc in discs]
    return Fixture(
        name="flower",
        kind=DiagramKind.PARABOLOID_UNION,
        quadrics=quadrics,
        expected={"base_components": n_petals + 1},
        params={"n_petals": n_petals},
        discs=discs,
    )


# ---------------- quadratic ellipsoids ----------------

def quadratic_bounds(k: int, eps: float) -> tuple[float, float]:
    """(δ bound, half-chord bound) of the construction; both must stay below (1, sin(π/k))."""
    delta = 1.0 - eps / 2.0 + eps * eps / (64.0 - 32.0 * eps)
    chord = math.sqrt(max(0.0, 1.0 - delta * delta))
    return delta, chord


def max_quadratic_eps(k: int) -> float:
    """Largest ε for which the half-chord bound stays below sin(π/k)."""
    target = math.sin(math.pi / k)
    return brentq(lambda e: quadratic_bounds(k, e)[1] - target, 1e-9, 1.0)


def _circle_point(angle: float, radius: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """Rational point on the circle of `radius` in {z = 0}, near `angle`."""
    t = rationalize(math.tan(angle / 2.0), 32) if abs(angle - math.pi) > 1e-12 else None
    if t is None:
        return (-radius, Fraction(0), Fraction(0))
    den = 1 + t * t
    return (radius * (1 - t * t) / den, radius * 2 * t / den, Fraction(0))


def fixture_quadratic_ellipsoids(k: int, eps: float | Fraction | None = None) -> Fixture:
    """
    2k ellipsoids whose EI diagram has at least k² arcs: k sites on a circle
    of radius 2 − ε around the sphere and k sites on a short vertical
    segment through its center, all with weight zero.

    Raises:
        FixtureParameterError: If k < 2 or ε violates the construction bounds.
    """
    if k < 2:
        raise FixtureParameterError("k must be at least 2", {"k": k})
    if eps is None:
        eps = 0.9 * max_quadratic_eps(k)
    eps_q = Fraction(eps).limit_denominator(10_000) if not isinstance(eps, Fraction) else eps
    e = float(eps_q)
    delta, chord = quadratic_bounds(k, e)
    if not (0.0 < e < 1.0) or delta >= 1.0 or chord >= math.sin(math.pi / k):
        raise FixtureParameterError(
            "eps too large for k",
            {"k": k, "eps": e, "delta": delta, "half_chord": chord, "limit": math.sin(math.pi / k)},
        )
    radius = 2 - eps_q
    points = []
    for i in range(k):
        points.append(WeightedPoint(_circle_point(2.0 * math.pi * i / k, radius), 0, len(points)))
    heights = [-eps_q / 4 + (eps_q / 2) * Fraction(j, k + 2) for j in range(1, k + 2)]
    heights = [h for h in heights if h != 0][:k]
    for h in heights:
        points.append(WeightedPoint((Fraction(0), Fraction(0), h), 0, len(points)))
    ellipsoids = ellipsoids_from_weighted_points(points, DiagramKind.ELLIPSOID_INTERSECTION)
    return Fixture(
        name="quadratic",
        kind=DiagramKind.ELLIPSOID_INTERSECTION,
        quadrics=list(ellipsoids),
        points=points,
        expected={"min_arcs": k * k},
        params={"k": k, "eps": str(eps_q)},
    )


# ---------------- equator ----------------

def equator_direction(t: Fraction) -> UnitDirection:
    """((t² − 1)/(1 + t²), 2t/(1 + t²), 0)."""
    den = 1 + t * t
    return UnitDirection(((t * t - 1) / den, 2 * t / den, Fraction(0)))


_AXES = [
    UnitDirection((Fraction(s), Fraction(0), Fraction(0))) for s in (1, -1)
] + [
    UnitDirection((Fraction(0), Fraction(s), Fraction(0))) for s in (1, -1)
] + [
    UnitDirection((Fraction(0), Fraction(0), Fraction(s))) for s in (1, -1)
]


def fixture_equator(ts: Sequence) -> Fixture:
    """
    Unit-focal paraboloids on the equator at parameters t, followed by the
    six axis directions ±e_x, ±e_y, ±e_z.

    Raises:
        FixtureParameterError: On repeated parameters or parameters landing
            on an axis direction (t = 0, ±1).
    """
    values = [Fraction(t) if not isinstance(t, float) else rationalize(t, 52) for t in ts]
    if len(values) < 1:
        raise FixtureParameterError("at least one parameter is required")
    if len(set(values)) != len(values):
        raise FixtureParameterError("equator parameters must be distinct", {"t": [str(v) for v in values]})
    if any(v in (0, 1, -1) for v in values):
        raise FixtureParameterError("t = 0 and t = ±1 coincide with axis directions")
    quadrics: list[Quadric] = [Paraboloid(equator_direction(t), 1) for t in values]
    quadrics += [Paraboloid(a, 1) for a in _AXES]
    n = len(values)
    return Fixture(
        name="equator",
        kind=DiagramKind.PARABOLOID_INTERSECTION,
        quadrics=quadrics,
        expected={"order": [int(i) for i in np.argsort([float(v) for v in values])],
                  "poles": [n + 4, n + 5]},
        params={"t": [str(v) for v in values]},
    )


def equator_cycle(quadrics: Sequence[Quadric], samples: int = 20_000) -> list[int]:
    """Cyclic sequence of lower-envelope winners along the equator, walked clockwise from −e_x."""
    from ..quadrics.radial import radial_matrix

    theta = math.pi - 2.0 * math.pi * (np.arange(samples) + 0.5) / samples
    u = np.stack([np.cos(theta), np.sin(theta), np.zeros(samples)], axis=1)
    winners = radial_matrix(quadrics, u).argmin(axis=1)
    cycle: list[int] = []
    for w in winners:
        if not cycle or cycle[-1] != w:
            cycle.append(int(w))
    if len(cycle) > 1 and cycle[0] == cycle[-1]:
        cycle.pop()
    return cycle


# ---------------- cube ----------------

def fixture_cube(offset: Fraction = Fraction(8, 5)) -> Fixture:
    """
    Unweighted sites at the origin and at ±offset·e_k. Every outer cell is
    a cap without vertices and the center cell is the sphere with six holes.
    """
    if not 1 < offset < 2:
        raise FixtureParameterError("offset must lie in (1, 2)", {"offset": str(offset)})
    zero = Fraction(0)
    points = [WeightedPoint((zero, zero, zero), 0, 0)]
    for axis in range(3):
        for sign in (1, -1):
            pos = [zero, zero, zero]
            pos[axis] = sign * offset
            points.append(WeightedPoint(tuple(pos), 0, len(points)))
    return Fixture(
        name="cube",
        kind=DiagramKind.PARABOLOID_INTERSECTION,
        points=points,
        expected={"F": 7, "V": 0, "E": 6, "center_holes": 6},
        params={"offset": str(offset)},
    )


# ---------------- random ----------------

def random_quadrics(n: int, kind: DiagramKind | str, seed: int = 0) -> list[Quadric]:
    """Rational quadrics with random directions; focal data drawn from fixed ranges."""
    kind = DiagramKind.parse(kind)
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n, 3))
    out: list[Quadric] = []
    for v in dirs:
        y = rational_direction(v, bits=32)
        if kind.is_ellipsoid:
            m = rationalize(float(rng.uniform(0.5, 2.0)), 24)
            e = rationalize(float(rng.uniform(0.2, 0.8)), 24)
            out.append(Ellipsoid(y, m, e))
        else:
            out.append(Paraboloid(y, rationalize(float(rng.uniform(0.5, 2.0)), 24)))
    return out


def fixture_random(n: int, kind: DiagramKind | str = "pi", seed: int = 0) -> Fixture:
    kind = DiagramKind.parse(kind)
    return Fixture(name="random", kind=kind, quadrics=random_quadrics(n, kind, seed),
                   params={"n": n, "seed": seed})


def lower_hemisphere_directions(n: int, seed: int = 0) -> list[UnitDirection]:
    """Random rational directions with z < 0."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        v = rng.standard_normal(3)
        v[2] = -abs(v[2])
        d = rational_direction(v, bits=32)
        if d.y[2] < 0 and d not in out:
            out.append(d)
    return out


# ---------------- image targets ----------------

def targets_from_image(
    grid: np.ndarray, cap_angle: float = math.pi / 3, bits: int = 32
) -> tuple[list[UnitDirection], np.ndarray]:
    """
    One target direction per positive pixel, inside the cap of angular
    radius `cap_angle` around +e_z, with α proportional to intensity.

    Pixel centers are scaled so the image square fits the stereographic
    disc of the cap; row 0 is the top of the picture.
    """
    img = np.asarray(grid, dtype=float)
    if img.ndim != 2 or np.any(img < 0) or not np.all(np.isfinite(img)):
        raise FixtureParameterError("image must be a 2D array of non-negative values")
    if not 0 < cap_angle < math.pi:
        raise FixtureParameterError("cap angle must lie in (0, π)", {"cap_angle": cap_angle})
    rows, cols = img.shape
    half = math.tan(cap_angle / 2.0) / math.sqrt(2.0)
    side = max(rows, cols)
    directions, weights = [], []
    for r in range(rows):
        for c in range(cols):
            v = img[r, c]
            if v <= 0:
                continue
            a = rationalize(((c + 0.5) / side * 2.0 - cols / side) * half, bits)
            b = rationalize((rows / side - (r + 0.5) / side * 2.0) * half, bits)
            # the stereographic chart covers the southern cap; mirror it north
            d = direction_from_stereographic(a, b)
            directions.append(UnitDirection((d.y[0], d.y[1], -d.y[2])))
            weights.append(v)
    if not directions:
        raise FixtureParameterError("image has no positive pixel")
    w = np.array(weights)
    alphas = w / math.fsum(w)
    alphas[int(np.argmax(alphas))] += 1.0 - math.fsum(alphas)
    return directions, alphas


def build_fixture(name: str, params: Optional[dict[str, Any]] = None, seed: int = 0) -> Fixture:
    """Fixture by name with string or numeric parameters, as given on the command line."""
    params = dict(params or {})
    if name == "flower":
        return fixture_flower(int(params.get("n", params.get("petals", 8))))
    if name == "quadratic":
        eps = params.get("eps")
        return fixture_quadratic_ellipsoids(int(params.get("k", 8)), None if eps is None else Fraction(str(eps)))
    if name == "equator":
        raw = params.get("t", "3;-2;1/2")
        ts = raw if isinstance(raw, (list, tuple)) else str(raw).split(";")
        return fixture_equator([Fraction(str(t)) for t in ts])
    if name == "cube":
        return fixture_cube(Fraction(str(params.get("offset", "8/5"))))
    if name == "random":
        return fixture_random(int(params.get("n", 50)), params.get("kind", "pi"), int(params.get("seed", seed)))
    raise FixtureParameterError(f"unknown fixture {name!r}",
                                {"known": ["flower", "quadratic", "equator", "cube", "random"]})
