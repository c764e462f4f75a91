from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuchsode.arith import (
    GaussianRational,
    decimal_render,
    format_complex,
    format_rational,
    gauss_round,
    parse_complex,
    parse_rational,
    sqrt_bounds,
)

fracs = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10 ** 6)
gauss = st.builds(GaussianRational, fracs, fracs)


def test_gauss_round_ties_toward_zero():
    assert gauss_round(GaussianRational(Fraction(5, 2), Fraction(-3, 2))) == GaussianRational(2, -1)
    assert gauss_round(GaussianRational(Fraction(-5, 2), Fraction(7, 3))) == GaussianRational(-2, 2)


def test_decimal_render_examples():
    assert decimal_render(Fraction(1, 4), 1, 3) == "0.250"
    assert decimal_render(1, 2, 6) == "1.41421"


def test_parse_rational_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rational("1/x")


@given(gauss, gauss)
def test_field_axioms(a, b):
    assert a + b - b == a
    assert (a * b).conj() == a.conj() * b.conj()
    if b:
        assert a / b * b == a


@given(gauss)
def test_norm_is_abs_squared(a):
    assert a * a.conj() == GaussianRational(a.norm())


@given(gauss)
def test_gauss_round_is_nearest(a):
    r = gauss_round(a)
    assert r.re.denominator == 1 and r.im.denominator == 1
    assert abs(a.re - r.re) <= Fraction(1, 2) and abs(a.im - r.im) <= Fraction(1, 2)


@given(gauss)
def test_format_parse_roundtrip(a):
    assert parse_complex(format_complex(a)) == a


@given(fracs)
def test_rational_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


@given(st.fractions(min_value=0, max_value=10 ** 9, max_denominator=1000))
def test_sqrt_bounds_bracket(q):
    lo, hi = sqrt_bounds(q)
    assert lo * lo <= q <= hi * hi
    assert lo <= hi
