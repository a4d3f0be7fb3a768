from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raagrigidity.exact import Q2, RootSum, format_length, format_q2, hypot_sq, parse_length, parse_q2

mpmath.mp.dps = 60

SMALL = st.fractions(min_value=-20, max_value=20, max_denominator=12)
Q2S = st.builds(Q2, SMALL, SMALL)
NONNEG = st.builds(Q2, st.fractions(min_value=0, max_value=30, max_denominator=6),
                   st.fractions(min_value=0, max_value=10, max_denominator=6))


def mp(x: Q2):
    return mpmath.mpf(x.a.numerator) / x.a.denominator + mpmath.sqrt(2) * x.b.numerator / x.b.denominator


def test_q2_field_operations():
    x = Q2(1, 1)
    assert x * x.conjugate() == Q2(-1)
    assert (1 / x) * x == Q2(1)
    assert x ** 2 == Q2(3, 2)
    assert Q2(0, 1).is_rational is False and Q2(3).is_rational


@settings(max_examples=200)
@given(x=Q2S, y=Q2S)
def test_q2_order_agrees_with_high_precision(x, y):
    assert (x < y) == (mp(x) < mp(y))
    assert (x == y) == (x.a == y.a and x.b == y.b)


@given(x=Q2S)
def test_format_parse_round_trip(x):
    assert parse_q2(format_q2(x)) == x


def test_parse_q2_forms():
    assert parse_q2("0.25") == Q2(Fraction(1, 4))
    assert parse_q2("1 + 3/4*sqrt2") == Q2(1, Fraction(3, 4))
    assert parse_q2("-sqrt2") == Q2(0, -1)
    with pytest.raises(ValueError):
        parse_q2("two")


def test_square_roots_simplify():
    assert RootSum.sqrt(Q2(8)) == RootSum.const(Q2(0, 2))
    assert RootSum.sqrt(Q2(3, 2)) == RootSum.const(Q2(1, 1))
    assert hypot_sq(3, 4) == RootSum.const(5)
    assert RootSum.sqrt(2) + RootSum.sqrt(8) == RootSum.const(Q2(0, 3))


@settings(max_examples=150, deadline=None)
@given(xs=st.lists(NONNEG, min_size=1, max_size=4), signs=st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4))
def test_root_sum_sign_agrees_with_high_precision(xs, signs):
    total = RootSum.const(0)
    ref = mpmath.mpf(0)
    for x, s in zip(xs, signs):
        total = total + RootSum.sqrt(x) * s
        ref += s * mpmath.sqrt(mp(x))
    if abs(ref) < mpmath.mpf(10) ** -40:
        assert total.sign() == 0
    else:
        assert total.sign() == (1 if ref > 0 else -1)
    assert abs(float(total) - float(ref)) < 1e-9


def test_near_cancellation_is_exact():
    lhs = RootSum.sqrt(Q2(3, 2))
    rhs = RootSum.const(1) + RootSum.sqrt(2)
    assert lhs == rhs
    tiny = RootSum.sqrt(10**12 + 1) - RootSum.const(10**6)
    assert tiny.sign() == 1 and float(tiny) > 0


def test_length_text_round_trip():
    v = RootSum.sqrt(Q2(13, 2))
    assert parse_length(format_length(v)) == v
    assert parse_length("7/2") == RootSum.const(Fraction(7, 2))
    assert format_length(RootSum.sqrt(2) * 2 - RootSum.sqrt(3)) == "2*sqrt(2) - sqrt(3)"
