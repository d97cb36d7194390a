"""Exact rational scalars, interval filters and small linear algebra."""
from .filtered import exact_sign, filter_stats, sign_filtered, to_interval
from .interval import Interval, interval_contains_zero
from .linalg import AffineSolution, det, det2, det3, det4, solve_exact
from .rational import as_rational, format_rational, parse_rational, rationalize

__all__ = [
    "AffineSolution",
    "Interval",
    "as_rational",
    "det",
    "det2",
    "det3",
    "det4",
    "exact_sign",
    "filter_stats",
    "format_rational",
    "interval_contains_zero",
    "parse_rational",
    "rationalize",
    "sign_filtered",
    "solve_exact",
    "to_interval",
]
