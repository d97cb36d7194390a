"""Conversions between text, floats and exact rationals."""
from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction, float, Decimal]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse an exact rational.

    Accepts integers, `"p/q"` strings and decimal strings (converted
    exactly, so `"0.1"` is 1/10). Floats are converted exactly from their
    binary value.

    Raises:
        ValueError: If the value cannot be interpreted as a rational.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            q = Fraction(int(num.strip()), int(den.strip()))
            return q
        try:
            return Fraction(Decimal(text))
        except InvalidOperation as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise ValueError(f"not a rational: {value!r}")


as_rational = parse_rational


def format_rational(q: Fraction) -> str | int:
    """JSON encoding of a rational: an int when integral, else "p/q"."""
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def rationalize(x: float, bits: int = 64) -> Fraction:
    """
    Rational approximation of a positive or negative float keeping
    `bits` significant bits.
    """
    if x == 0.0:
        return Fraction(0)
    if not math.isfinite(x):
        raise ValueError(f"cannot rationalize {x!r}")
    m, e = math.frexp(x)
    # x = m * 2**e, 0.5 <= |m| < 1
    scaled = round(Fraction(m) * (1 << bits))
    return Fraction(scaled) * Fraction(2) ** (e - bits)


def sqrt_bounds(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction, bool]:
    """
    Rational bounds lo <= sqrt(q) <= hi.

    Returns:
        (lo, hi, exact) where exact means lo == hi == sqrt(q).
    """
    if q < 0:
        raise ValueError("negative radicand")
    num_root = math.isqrt(q.numerator)
    den_root = math.isqrt(q.denominator)
    if num_root * num_root == q.numerator and den_root * den_root == q.denominator:
        root = Fraction(num_root, den_root)
        return root, root, True
    scale = 1 << bits
    # floor(sqrt(q) * scale) via integer sqrt of q * scale^2
    scaled = q * scale * scale
    lo_int = math.isqrt(scaled.numerator // scaled.denominator)
    lo = Fraction(lo_int, scale)
    hi = Fraction(lo_int + 1, scale)
    return lo, hi, False
