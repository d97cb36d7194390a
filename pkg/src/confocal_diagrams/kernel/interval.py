"""
Interval scalars with outward rounding.

Every arithmetic result is widened by one ulp in each direction, so the
interval always encloses the exact rational value of the expression it was
computed from. Exact conversions (values representable as doubles) are not
widened.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, float, Fraction]

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval [lo, hi] of doubles."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def of(cls, value: Number | "Interval") -> "Interval":
        """Smallest double interval enclosing `value`."""
        if isinstance(value, Interval):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            f = float(value) if abs(value) < 2**1023 else math.copysign(_INF, value)
            if math.isinf(f) or int(f) != value:
                return cls(_down(f), _up(f))
            return cls(f, f)
        if isinstance(value, float):
            return cls(value, value)
        q = Fraction(value)
        try:
            f = float(q)
        except OverflowError:
            f = math.copysign(_INF, q)
        if math.isinf(f) or Fraction(f) != q:
            return cls(_down(f), _up(f))
        return cls(f, f)

    # ---------------- arithmetic ----------------
    def __add__(self, other: Number | "Interval") -> "Interval":
        o = Interval.of(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __sub__(self, other: Number | "Interval") -> "Interval":
        o = Interval.of(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other: Number | "Interval") -> "Interval":
        return Interval.of(other) - self

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: Number | "Interval") -> "Interval":
        o = Interval.of(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        if any(math.isnan(p) for p in products):
            # 0 * inf
            return Interval(-_INF, _INF)
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other: Number | "Interval") -> "Interval":
        o = Interval.of(other)
        if o.lo <= 0.0 <= o.hi:
            return Interval(-_INF, _INF)
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other: Number | "Interval") -> "Interval":
        return Interval.of(other) / self

    def square(self) -> "Interval":
        """Tighter enclosure of x² than x * x when the interval straddles 0."""
        if self.lo >= 0.0:
            return Interval(_down(self.lo * self.lo), _up(self.hi * self.hi))
        if self.hi <= 0.0:
            return Interval(_down(self.hi * self.hi), _up(self.lo * self.lo))
        m = max(-self.lo, self.hi)
        return Interval(0.0, _up(m * m))

    # ---------------- queries ----------------
    def contains(self, value: Number) -> bool:
        """Exact membership test of a rational or float value."""
        q = Fraction(value)
        return self.lo <= q <= self.hi

    def sign(self) -> int | None:
        """Certified sign, or None when the interval straddles zero."""
        if self.lo > 0.0:
            return 1
        if self.hi < 0.0:
            return -1
        if self.lo == 0.0 and self.hi == 0.0:
            return 0
        return None

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def interval_contains_zero(interval: Interval) -> bool:
    """True iff lo <= 0 <= hi."""
    return interval.lo <= 0.0 <= interval.hi
