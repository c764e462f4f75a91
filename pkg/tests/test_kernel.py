import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fuchsode.kernel as kernel
from fuchsode.arith import GaussianRational
from fuchsode.errors import PivotZero
from fuchsode.kernel import band_residual, extend_recursion, initial_basis, integerize
from fuchsode.operator import compute_beta
from fuchsode.oracles import ex1_operator
from fuchsode.selftest import random_operator


def _rank(vectors):
    A = [list(v) for v in vectors]
    rank = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(rank + 1, len(A)):
            if A[i][c]:
                f = A[i][c] / A[rank][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def test_ex1_basis_dimension():
    beta = compute_beta(ex1_operator())
    kb = initial_basis(beta)
    assert kb.D == 5 and kb.length == 6


def test_ex1_extension_solves_every_full_row():
    beta = compute_beta(ex1_operator())
    kb = extend_recursion(initial_basis(beta), beta, 40)
    assert all(len(v) == 41 for v in kb.raw)
    for v in kb.vectors:
        assert band_residual(beta, v, 40) == []
    assert _rank(kb.vectors) == kb.D


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_operator_kernel(seed):
    op = random_operator(random.Random(seed), max_M=2, max_deg=2)
    beta = compute_beta(op)
    N = beta.p0 + 15
    kb = extend_recursion(initial_basis(beta), beta, N)
    for v in kb.vectors:
        assert band_residual(beta, v, N) == []


def test_larger_start_keeps_residual_zero():
    beta = compute_beta(ex1_operator())
    kb = extend_recursion(initial_basis(beta, beta.p0 + 3), beta, 30)
    assert all(band_residual(beta, v, 30) == [] for v in kb.vectors)


def test_p0_below_minimum_rejected():
    beta = compute_beta(ex1_operator())
    with pytest.raises(ValueError):
        initial_basis(beta, beta.p0 - 1)


def test_interleaved_reduction_keeps_span():
    beta = compute_beta(ex1_operator())
    plain = extend_recursion(initial_basis(beta), beta, 30)
    mixed = extend_recursion(initial_basis(beta), beta, 30, interleave_reduce_every=5)
    assert _rank(plain.vectors + mixed.vectors) == plain.D
    assert all(band_residual(beta, v, 30) == [] for v in mixed.vectors)


def test_threaded_extension_matches(monkeypatch):
    beta = compute_beta(ex1_operator())
    one = extend_recursion(initial_basis(beta), beta, 25, threads=1)
    monkeypatch.setenv(kernel.THREADS_ENV, "2")
    assert kernel.thread_count() == 2
    two = extend_recursion(initial_basis(beta), beta, 25)
    assert one.raw == two.raw


def test_zero_pivot_raises(monkeypatch):
    beta = compute_beta(ex1_operator())
    real = kernel.matrix_element

    def broken(b, m, n):
        if n == 12 and m == n - b.ell0:
            return GaussianRational(0)
        return real(b, m, n)

    monkeypatch.setattr(kernel, "matrix_element", broken)
    with pytest.raises(PivotZero):
        extend_recursion(initial_basis(beta), beta, 20)


def test_integerize_clears_denominators():
    v = [GaussianRational(1, 2), GaussianRational(0, 3) / 4, GaussianRational(5)]
    w = integerize(v)
    assert all(z.re.denominator == 1 and z.im.denominator == 1 for z in w)
    assert w[0] * v[2] == w[2] * v[0]
