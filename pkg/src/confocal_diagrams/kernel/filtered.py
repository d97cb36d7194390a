"""
Dynamically filtered sign evaluation.

A predicate is written once as a polynomial expression over a generic
ring (it may only use +, -, * and integer constants). `sign_filtered`
evaluates it over `Interval` first and only re-runs it over `Fraction`
when the interval straddles zero, so the returned sign is always exact.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .interval import Interval


@dataclass
class FilterStats:
    """Counts of filtered evaluations and of exact fallbacks."""

    calls: int = 0
    fallbacks: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, fallback: bool) -> None:
        with self._lock:
            self.calls += 1
            if fallback:
                self.fallbacks += 1

    def reset(self) -> None:
        with self._lock:
            self.calls = 0
            self.fallbacks = 0

    def snapshot(self) -> dict[str, int]:
        with self._lock:
            return {"calls": self.calls, "fallbacks": self.fallbacks}


filter_stats = FilterStats()


def to_interval(value: Any) -> Any:
    """Convert a rational scalar or a nested tuple/list of them to intervals."""
    if isinstance(value, (tuple, list)):
        return tuple(to_interval(v) for v in value)
    if isinstance(value, Interval):
        return value
    return Interval.of(value)


def exact_sign(value: Fraction | int) -> int:
    """Sign of an exact scalar."""
    return (value > 0) - (value < 0)


def sign_filtered(
    expression: Callable[..., Any],
    *args: Any,
    interval_args: Sequence[Any] | None = None,
) -> int:
    """
    Exact sign of `expression(*args)`.

    Args:
        expression: Polynomial expression over its arguments.
        *args: Rational scalars (or nested tuples of them).
        interval_args: Pre-converted interval versions of `args`, when the
            caller caches them.

    Returns:
        -1, 0 or +1.
    """
    iargs = interval_args if interval_args is not None else to_interval(args)
    approx = expression(*iargs)
    if not isinstance(approx, Interval):
        approx = Interval.of(approx)
    s = approx.sign()
    if s is not None:
        filter_stats.record(False)
        return s
    filter_stats.record(True)
    return exact_sign(expression(*args))
