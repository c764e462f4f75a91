from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsode.arith import GaussianRational
from fuchsode.basis import bilateral_index, psi_eval
from fuchsode.errors import DegenerateNormalization, DivisionByZeroCoeff, DivisionByZeroValue
from fuchsode.evaluate import (
    INF,
    EvaluatedSolution,
    emit_plot_data,
    eval_at,
    log10_floor,
    normalize_standard,
    parse_grid,
    ratio_coeffs,
    ratio_points,
    render_value,
    significant_digits,
)

bounded = st.fractions(min_value=-20, max_value=20, max_denominator=9)
gauss = st.builds(GaussianRational, bounded, bounded)
points = st.fractions(min_value=-30, max_value=30, max_denominator=12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.lists(gauss, min_size=1, max_size=12), points)
def test_eval_matches_direct_sum(k0, coeffs, x):
    sol = EvaluatedSolution.make(coeffs, k0)
    direct = GaussianRational(0)
    for n, c in enumerate(coeffs):
        direct = direct + c * psi_eval(k0, bilateral_index(k0, n), x)
    assert eval_at(sol, x) == direct


def test_ratio_coeffs_and_conjugate():
    sol = EvaluatedSolution.make([GaussianRational(2), GaussianRational(1, 1)], 0)
    assert ratio_coeffs(sol, 1, 0) == GaussianRational(Fraction(1, 2), Fraction(1, 2))
    assert ratio_coeffs(sol, 1, 0, conjugate=True) == GaussianRational(Fraction(1, 2), Fraction(-1, 2))
    with pytest.raises(DivisionByZeroCoeff):
        ratio_coeffs(sol, 0, 5)


def test_ratio_points_zero_denominator():
    sol = EvaluatedSolution.make([GaussianRational(0)], 0)
    with pytest.raises(DivisionByZeroValue):
        ratio_points(sol, 1, 2)


def test_normalize_standard_sums_to_two():
    sol = EvaluatedSolution.make([GaussianRational(3), GaussianRational(1), GaussianRational(5)], 0)
    norm = normalize_standard(sol)
    # level 0: bilateral indices 0 and -1 sit at positions 1 and 0
    assert norm.coeffs[0] + norm.coeffs[1] == 2
    assert ratio_coeffs(norm, 2, 0) == ratio_coeffs(sol, 2, 0)
    with pytest.raises(DegenerateNormalization):
        normalize_standard(EvaluatedSolution.make([GaussianRational(1), GaussianRational(-1)], 0))


@given(st.fractions(min_value=Fraction(1, 10 ** 30), max_value=10 ** 30))
def test_log10_floor(x):
    e = log10_floor(x)
    assert Fraction(10) ** e <= x < Fraction(10) ** (e + 1)


def test_log10_floor_huge():
    assert log10_floor(Fraction(10 ** 5000 + 1, 3)) == 4999


def test_significant_digits():
    ref = GaussianRational(Fraction(1, 3), Fraction(-2, 7))
    assert significant_digits(ref, ref) == (INF, INF)
    a = GaussianRational(Fraction(3333, 10000), Fraction(-2857, 10000))
    assert significant_digits(a, ref) == (4, 4)
    # a zero component is measured on the scale of the whole reference
    assert significant_digits(GaussianRational(1, Fraction(1, 10 ** 9)), GaussianRational(1, 0))[1] == 9


def test_parse_grid():
    assert parse_grid("-1:1:1/2") == [-1, Fraction(-1, 2), 0, Fraction(1, 2), 1]
    with pytest.raises(ValueError):
        parse_grid("0:1:0")
    with pytest.raises(ValueError):
        parse_grid("0:1")


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=999), st.integers(0, 12))
def test_render_value_over_sqrt_pi(x, places):
    got = Fraction(render_value(x, places, True))
    with mpmath.workdps(60):
        exact = mpmath.mpf(x.numerator) / x.denominator / mpmath.sqrt(mpmath.pi)
        assert abs(mpmath.mpf(got.numerator) / got.denominator - exact) <= mpmath.mpf(10) ** (-places) / 2 * 1.0000001


def test_plot_lines():
    sol = EvaluatedSolution.make([GaussianRational(1)], 0, "standard")
    lines = emit_plot_data(sol, [0, 1], 3)
    # psi_{0,-1}(x) = 1/(x - i)
    assert lines == ["x,re,im", "0.000,0.000,1.000", "1.000,0.500,0.500"]
