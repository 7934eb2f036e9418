from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from coversplit.rational import floor_root, floor_root_of_power_of_two, format_rational, parse_rational, sqrt_approx

fractions = st.fractions(max_denominator=10**6)


@given(fractions)
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("text,value", [("1/100", Fraction(1, 100)), ("-3", Fraction(-3)), (" 6/4 ", Fraction(3, 2))])
def test_parse_accepts_integers_and_fractions(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.25", "1e3", "1/0", "", "a/b", "1/-2"])
def test_parse_rejects_inexact_or_malformed(text):
    with pytest.raises(ValueError):
        parse_rational(text)


@given(st.fractions(min_value=0, max_value=10**6, max_denominator=10**4), st.integers(min_value=1, max_value=80))
def test_sqrt_approx_brackets_root(q, bits):
    r = sqrt_approx(q, bits)
    assert r >= 0
    assert r * r <= q < (r + Fraction(1, 2**bits)) ** 2


@pytest.mark.parametrize(
    "num,den,expected",
    [(9, 2, 22), (0, 1, 1), (-1, 2, 0), (5, 1, 32), (1, 2, 1), (10, 2, 32)],
)
def test_floor_of_dyadic_power(num, den, expected):
    # 2^4.5 = 22.627..., 2^-0.5 = 0.707...
    assert floor_root_of_power_of_two(num, den) == expected


@given(st.integers(min_value=0, max_value=10**12))
def test_floor_root_square_matches_isqrt(n):
    assert floor_root(Fraction(n), 2) == isqrt(n)


@given(st.fractions(min_value=0, max_value=10**4, max_denominator=1000), st.integers(min_value=2, max_value=5))
def test_floor_root_defining_inequality(q, d):
    f = floor_root(q, d)
    assert f**d <= q < (f + 1) ** d
