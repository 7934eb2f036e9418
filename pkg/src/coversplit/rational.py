"""Exact rational helpers shared by the geometric modules."""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text) -> Fraction:
    """Parse ``"N/D"`` or ``"N"`` into a Fraction.

    Decimal and exponent notation are rejected on purpose: every input to
    this package is exact.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string 'N/D', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not an exact rational 'N/D': {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def sqrt_approx(q: Fraction, bits: int) -> Fraction:
    """Rational r with r <= sqrt(q) < r + 2**-bits (q >= 0)."""
    if q < 0:
        raise ValueError("square root of a negative rational")
    scaled = (q.numerator << (2 * bits)) // q.denominator
    return Fraction(isqrt(scaled), 1 << bits)


def floor_root_of_power_of_two(num: int, den: int) -> int:
    """floor(2**(num/den)) for den > 0, computed exactly."""
    if den <= 0:
        raise ValueError("den must be positive")
    if num < 0:
        return 0
    target = 1 << num
    # integer den-th root of 2**num
    lo, hi = 1, 1 << (num // den + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** den <= target:
            lo = mid
        else:
            hi = mid - 1
    return lo


def floor_root(q: Fraction, d: int) -> int:
    """Largest integer N >= 0 with N**d <= q."""
    if q < 1:
        return 0
    lo, hi = 1, 1
    while hi ** d <= q:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid ** d <= q:
            lo = mid
        else:
            hi = mid
    return lo
