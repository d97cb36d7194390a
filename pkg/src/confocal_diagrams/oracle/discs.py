"""
Connected components of a planar window minus a union of discs, by flood
fill.

Pixels are joined with 8-connectivity. Components smaller than
MIN_FEATURE_PIXELS² pixels are staircase debris at cusps and are not
counted; the resolution is raised until every disc and every bounded gap
spans at least MIN_FEATURE_PIXELS pixels, so real gaps are never that
small.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import shapely
from scipy import ndimage
from shapely.geometry import Point, Polygon
from shapely.ops import polylabel

from ..core.exceptions import ResolutionError
from ..core.logging_config import get_logger
from ..core.settings import settings
from ..quadrics.types import DiscSpec

logger = get_logger(__name__)

MIN_FEATURE_PIXELS = 4
_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)
_DISC_SEGMENTS = 64


@dataclass(frozen=True)
class Window:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def size(self) -> float:
        return max(self.xmax - self.xmin, self.ymax - self.ymin)

    @classmethod
    def around(cls, discs: Sequence[tuple[float, float, float]], pad: float = 0.1) -> "Window":
        if not discs:
            return cls(-1.0, -1.0, 1.0, 1.0)
        arr = np.array(discs, dtype=float)
        lo = (arr[:, :2] - arr[:, 2:3]).min(axis=0)
        hi = (arr[:, :2] + arr[:, 2:3]).max(axis=0)
        margin = pad * float(np.max(hi - lo))
        return cls(lo[0] - margin, lo[1] - margin, hi[0] + margin, hi[1] + margin)


def _as_tuples(discs: Iterable[DiscSpec | tuple[float, float, float]]) -> list[tuple[float, float, float]]:
    out = []
    for d in discs:
        if isinstance(d, DiscSpec):
            cx, cy = d.center
            out.append((cx, cy, d.radius))
        else:
            cx, cy, r = d
            out.append((float(cx), float(cy), float(r)))
    return out


def disc_gaps(discs: Sequence[DiscSpec | tuple[float, float, float]]) -> list[Polygon]:
    """Bounded components of the plane minus the discs, as polygons."""
    items = _as_tuples(discs)
    if not items:
        return []
    union = shapely.union_all([Point(cx, cy).buffer(r, quad_segs=_DISC_SEGMENTS) for cx, cy, r in items])
    gaps = []
    for part in shapely.get_parts(union):
        for ring in part.interiors:
            hole = shapely.difference(Polygon(ring), union)
            gaps.extend(g for g in shapely.get_parts(hole) if isinstance(g, Polygon) and g.area > 0.0)
    return gaps


def narrowest_gap(discs: Sequence[DiscSpec | tuple[float, float, float]]) -> float:
    """Diameter of the smallest inscribed circle over the bounded gaps; inf without gaps."""
    widths = []
    for gap in disc_gaps(discs):
        minx, miny, maxx, maxy = gap.bounds
        center = polylabel(gap, tolerance=1e-4 * max(maxx - minx, maxy - miny))
        widths.append(2.0 * gap.boundary.distance(center))
    return min(widths, default=float("inf"))


def _count(discs: list[tuple[float, float, float]], window: Window, resolution: int) -> int:
    step = window.size / resolution
    xs = window.xmin + (np.arange(resolution) + 0.5) * step
    ys = window.ymin + (np.arange(resolution) + 0.5) * step
    covered = np.zeros((resolution, resolution), dtype=bool)
    for cx, cy, r in discs:
        covered |= (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2 <= r * r
    labels, count = ndimage.label(~covered, structure=_EIGHT_CONNECTED)
    if count == 0:
        return 0
    sizes = np.bincount(labels.ravel())[1:]
    return int(np.count_nonzero(sizes >= MIN_FEATURE_PIXELS ** 2))


def disc_arrangement_components(
    discs: Sequence[DiscSpec | tuple[float, float, float]],
    window: Optional[Window] = None,
    resolution: Optional[int] = None,
    max_resolution: Optional[int] = None,
) -> int:
    """
    Number of connected components of window ∖ ∪ discs.

    The count is accepted once it is identical at resolution R and 2R and
    the smallest disc radius and the smallest gap radius both span at
    least MIN_FEATURE_PIXELS pixels; R doubles until then.

    Raises:
        ResolutionError: If no stable count is reached by `max_resolution`.
    """
    items = _as_tuples(discs)
    window = window or Window.around(items)
    res = settings.oracle_resolution if resolution is None else resolution
    cap = settings.oracle_max_resolution if max_resolution is None else max_resolution
    if not items:
        return 1
    feature = min(min(r for _, _, r in items), narrowest_gap(items) / 2.0)
    while res <= cap:
        if feature / (window.size / res) < MIN_FEATURE_PIXELS:
            res *= 2
            continue
        coarse = _count(items, window, res)
        if 2 * res > cap:
            break
        fine = _count(items, window, 2 * res)
        if coarse == fine:
            logger.debug("Flood fill: %d components at %d and %d pixels", coarse, res, 2 * res)
            return coarse
        res *= 2
    raise ResolutionError("flood fill did not stabilize; use a finer grid",
                          {"max_resolution": cap, "discs": len(items), "feature": feature})
