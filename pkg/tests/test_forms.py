import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsode.arith import GaussianRational
from fuchsode.forms import (
    WeightSpec,
    default_J,
    default_K,
    gram_matrix,
    inner_l2K,
    inner_QN,
    mu,
    weight,
    weights,
)

pairs = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


def test_default_cutoffs():
    assert (default_K(47, 2), default_J(47, 2)) == (36, 42)
    assert (default_K(999, 0), default_J(999, 0)) == (748, 874)


def test_weights_are_flat_then_grow_then_flat():
    spec = WeightSpec.make(47, 2, base=10)
    w = weights(spec)
    assert all(x == 1 for x in w[:spec.K + 1])
    assert w == sorted(w)
    assert w[spec.J] == w[spec.N] > 1


def test_mu_grows_by_one_per_pair():
    # only differences of mu enter the weights
    assert [mu(2, n) for n in range(5)] == [-1, -1, 0, 0, 1]
    assert [mu(0, n) for n in range(5)] == [0, 0, 1, 1, 2]


@given(st.integers(0, 6), st.integers(0, 400))
def test_mu_steps_every_two_positions(k0, n):
    assert mu(k0, n + 2) == mu(k0, n) + 1
    assert mu(k0, n + 1) - mu(k0, n) in (0, 1)


def test_spec_check_ordering():
    with pytest.raises(ValueError):
        WeightSpec.make(20, 0, K=15, J=10).check(3)
    with pytest.raises(ValueError):
        WeightSpec.make(20, 0, K=2).check(3)


def test_weight_integrality():
    spec = WeightSpec.make(30, 1, base=7)
    assert all(weight(spec, n).denominator == 1 for n in range(31))


@settings(max_examples=30)
@given(st.lists(st.lists(pairs, min_size=6, max_size=6), min_size=1, max_size=4))
def test_gram_matches_inner_products(vs):
    spec = WeightSpec.make(5, 0, K=2, J=4, base=3)
    w = weights(spec)
    P = gram_matrix(vs, w)
    Q = gram_matrix(vs, None, spec.K)
    gv = [[GaussianRational(*z) for z in v] for v in vs]
    for j in range(len(vs)):
        for l in range(len(vs)):
            assert GaussianRational(*P[j][l]) == inner_QN(spec, gv[j], gv[l])
            assert GaussianRational(*Q[j][l]) == inner_l2K(spec, gv[j], gv[l])
            assert P[j][l] == (P[l][j][0], -P[l][j][1])


@given(st.lists(pairs, min_size=6, max_size=6))
def test_qn_dominates_l2k(v):
    spec = WeightSpec.make(5, 0, K=2, J=4, base=3)
    g = [GaussianRational(*z) for z in v]
    assert inner_QN(spec, g, g).re >= inner_l2K(spec, g, g).re
