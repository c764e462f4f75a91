import random

from hypothesis import given, settings
from hypothesis import strategies as st

from fuchsode.operator import validate_operator
from fuchsode.selftest import SUITES, random_gaussian_basis, random_operator, run_selftest


def test_suite_names():
    assert [name for name, _ in SUITES] == [
        "recursion-identities", "oracle-equivalence", "band-structure", "kernel-residual",
        "quasi-orth-postconditions", "halting", "exact-endpoint", "exact-rounding"]


def test_all_suites_pass():
    report = run_selftest()
    assert report["passed"], report


def test_beta_mutation_is_caught_by_the_oracle_suite_only():
    report = run_selftest(mutation="beta")
    assert not report["passed"]
    assert [s["name"] for s in report["suites"] if not s["passed"]] == ["oracle-equivalence"]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_random_operators_are_valid(seed):
    op = random_operator(random.Random(seed), max_M=3, max_deg=3, span=2)
    validate_operator(op)
    assert op.k0d == op.k0 - op.max_excess()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 9), st.integers(1, 4))
def test_random_bases_have_full_rank(seed, D):
    vs = random_gaussian_basis(random.Random(seed), D, D + 2, span=3)
    assert len(vs) == D and all(len(v) == D + 2 for v in vs)
