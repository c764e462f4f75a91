from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuchsode.arith import GaussianRational
from fuchsode.basis import (
    bilateral_index,
    check_recursion_identities,
    l2_inner_psi,
    psi_eval,
    unilateral_index,
)


def test_index_sequence_level_two():
    assert [bilateral_index(2, n) for n in range(6)] == [-2, -1, -3, 0, -4, 1]


def test_index_sequence_level_zero():
    assert [bilateral_index(0, n) for n in range(5)] == [-1, 0, -2, 1, -3]


@given(st.integers(0, 8), st.integers(0, 500))
def test_index_roundtrip(k, n):
    assert unilateral_index(k, bilateral_index(k, n)) == n


@given(st.integers(0, 8), st.integers(-300, 300))
def test_index_inverse_roundtrip(k, a):
    assert bilateral_index(k, unilateral_index(k, a)) == a


def test_negative_position_rejected():
    with pytest.raises(ValueError):
        bilateral_index(0, -1)


def test_psi_at_zero():
    # psi_{0,0}(0) = 1/i
    assert psi_eval(0, 0, 0) == GaussianRational(0, -1)


@given(st.integers(0, 5), st.integers(-8, 8), st.fractions(max_denominator=20).filter(lambda x: abs(x) < 50))
def test_identities_hold(k, a, x):
    assert check_recursion_identities(k, a, [x])


def test_identities_detect_mutation():
    samples = [Fraction(1, 3), Fraction(2)]
    assert not check_recursion_identities(1, 2, samples, _diff_shift=0)


def test_l2_inner_level_zero_is_identity():
    assert l2_inner_psi(0, 3, 3) == 1
    assert l2_inner_psi(0, 3, 4) == 0
