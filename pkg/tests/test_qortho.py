import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsode.arith import GaussianRational
from fuchsode.errors import AllDegenerate, IterationCapExceeded
from fuchsode.forms import GramPair, WeightSpec, gram_matrix
from fuchsode.kernel import extend_recursion, initial_basis
from fuchsode.operator import compute_beta
from fuchsode.oracles import ex1_operator, two_solution_operator
from fuchsode.qortho import (
    OrthoParams,
    _congruence,
    _Log,
    _nearest_plane,
    certificate_min_ratio,
    hermitian_psd,
    pairwise_l2_certificate,
    reduce_preliminary,
    reduce_strong,
    run_pipeline,
    select_min_ratio,
    suggest_dimension,
)
from fuchsode.selftest import random_gaussian_basis


def _rank(rows):
    A = [[GaussianRational(*z) for z in r] for r in rows]
    rank = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(rank + 1, len(A)):
            f = A[i][c] / A[rank][c]
            A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def _cos_ok(F, h, j, l):
    z = F[j][l]
    return h * h * (z[0] ** 2 + z[1] ** 2) < F[j][j][0] * F[l][l][0]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(2, 5), st.sampled_from([4, 16, 64]))
def test_strong_reduction_postconditions(seed, D, h):
    rng = random.Random(seed)
    vs = random_gaussian_basis(rng, D, rng.randint(D, 20), span=10 ** 3)
    G = gram_matrix(vs)
    gp = GramPair.identity(G, G)
    reduce_preliminary(gp, "QN", 0)
    reduce_strong(gp, "QN", h, 0)
    assert all(_cos_ok(gp.p, h, j, l) for j in range(D) for l in range(j))
    assert _congruence(gp.c, G) == gp.p
    assert _rank(gp.c) == D


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_frozen_rows_untouched(seed):
    rng = random.Random(seed)
    vs = random_gaussian_basis(rng, 4, 10)
    G = gram_matrix(vs)
    gp = GramPair.identity(G, G)
    before = [list(r) for r in gp.c[:2]]
    reduce_preliminary(gp, "QN", 2, 0)
    reduce_strong(gp, "QN", 8, 2, 0)
    assert gp.c[:2] == before
    assert all(_cos_ok(gp.p, 8, j, l) for j in range(2, 4) for l in range(j))


def test_iteration_cap():
    vs = [[(10 ** 6, 0), (1, 0)], [(10 ** 6 + 1, 0), (1, 0)]]
    G = gram_matrix(vs)
    with pytest.raises(IterationCapExceeded):
        reduce_strong(GramPair.identity(G, G), "QN", 64, 0, max_iterations=1)


def test_nearest_plane_reaches_the_residual():
    vs = [[(1, 0), (0, 0), (0, 0)], [(1, 0), (1, 0), (0, 0)], [(10, 0), (7, 0), (1, 0)]]
    G = gram_matrix(vs)
    gp = GramPair.identity(G, G)
    assert _nearest_plane(gp, "QN", 2, [0, 1], _Log(3), "t")
    assert gp.p[2][2] == (1, 0)
    assert gp.c[2] == [(-3, 0), (-7, 0), (1, 0)]


def test_nearest_plane_declines_when_nothing_to_do():
    vs = [[(1, 0), (0, 0)], [(0, 0), (1, 0)]]
    G = gram_matrix(vs)
    gp = GramPair.identity(G, G)
    assert not _nearest_plane(gp, "QN", 1, [0], _Log(2), "t")


def test_select_min_ratio():
    p = [[(8, 0), (0, 0)], [(0, 0), (3, 0)]]
    q = [[(4, 0), (0, 0)], [(0, 0), (3, 0)]]
    assert select_min_ratio(GramPair.identity(p, q)) == 1
    z = [[(0, 0), (0, 0)], [(0, 0), (0, 0)]]
    with pytest.raises(AllDegenerate):
        select_min_ratio(GramPair.identity(p, z))


def test_suggest_dimension():
    assert suggest_dimension([1, 2, 10 ** 7, 10 ** 8]) == 2
    assert suggest_dimension([1, 2, 3]) is None


def test_hermitian_psd():
    assert hermitian_psd([[(2, 0), (1, 1)], [(1, -1), (1, 0)]])
    assert not hermitian_psd([[(1, 0), (2, 0)], [(2, 0), (1, 0)]])
    assert hermitian_psd([[(0, 0), (0, 0)], [(0, 0), (1, 0)]])


def _pipeline(op, N, target, bound=False):
    beta = compute_beta(op)
    basis = extend_recursion(initial_basis(beta), beta, N)
    spec = WeightSpec.make(N, op.k0)
    params = OrthoParams(target_dim=target, compute_bound_data=bound)
    return basis, spec, params, run_pipeline(basis, spec, params)


def test_pipeline_ex1_selects_one_vector():
    basis, spec, params, sol = _pipeline(ex1_operator(), 23, 1, True)
    assert len(sol.G) == 1 and sol.D == 5
    assert len(sol.residual) == 4
    assert all(len(v) == spec.K + 1 for v in sol.G_trunc)
    cert = certificate_min_ratio(sol, basis, spec, params.h)
    assert cert["candidates"] and cert["span"]
    assert cert["c"] == Fraction(5) / (1 - Fraction(4, 64))


def test_pipeline_two_solutions():
    basis, spec, params, sol = _pipeline(two_solution_operator(), 40, 2, True)
    assert len(sol.G) == 2
    assert pairwise_l2_certificate(sol, params.g)
    assert sol.sigma[0] <= sol.sigma[1]
