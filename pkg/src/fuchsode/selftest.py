"""Embedded invariant corpus run by ``fuchsode selftest``.

Every suite is deterministic (fixed seeds) and small enough to run in a few
seconds. The ``mutation`` argument is a test hook: ``"beta"`` swaps in a
deliberately broken matrix-element compiler so that the oracle comparison
must fail.
"""

import random
from fractions import Fraction

from .arith import GaussianRational, decimal_render, gauss_round
from .basis import check_recursion_identities
from .evaluate import EvaluatedSolution, ratio_coeffs
from .forms import GramPair, WeightSpec, gram_matrix
from .kernel import band_residual, extend_recursion, initial_basis
from .operator import ODEOperator, compute_beta, matrix_element, validate_operator
from .oracles import ex1_operator, oracle_matrix_element
from .qortho import OrthoParams, reduce_preliminary, reduce_strong, run_pipeline

__all__ = ["SUITES", "random_operator", "random_gaussian_basis", "run_selftest"]


def random_operator(rng, max_M=3, max_deg=3, span=5):
    """Random operator with q_M(+-i) != 0 and the largest admissible k0d."""
    while True:
        M = rng.randint(1, max_M)
        polys = [[Fraction(rng.randint(-span, span)) for _ in range(rng.randint(1, max_deg + 1))]
                 for _ in range(M + 1)]
        k0 = rng.randint(0, 3)
        if not any(any(p) for p in polys):
            continue
        probe = ODEOperator(M, polys, k0, -10 ** 6)
        op = ODEOperator(M, polys, k0, k0 - probe.max_excess())
        try:
            validate_operator(op)
        except Exception:
            continue
        return op


def random_gaussian_basis(rng, D, length, span=50):
    """D random Gaussian-integer vectors that are linearly independent."""
    while True:
        vs = [[(rng.randint(-span, span), rng.randint(-span, span)) for _ in range(length)]
              for _ in range(D)]
        if _det_positive(gram_matrix(vs)):
            return vs


def _det_positive(G):
    A = [[GaussianRational(*x) for x in row] for row in G]
    n = len(A)
    for k in range(n):
        if not A[k][k]:
            return False
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return True


def _suite_recursion(mutation):
    samples = [Fraction(-3, 2), Fraction(0), Fraction(1, 3), Fraction(2), Fraction(7, 5)]
    bad = [(k, a) for k in range(0, 4) for a in range(-4, 5)
           if not check_recursion_identities(k, a, samples)]
    return not bad, "%d failing (k, a) pairs" % len(bad)


def _suite_oracle(mutation):
    rng = random.Random(20240611)
    shift = 0 if mutation == "beta" else 1
    bad = 0
    for _ in range(3):
        op = random_operator(rng)
        beta = compute_beta(op, _diff_shift=shift)
        for m in range(16):
            for n in range(16):
                if matrix_element(beta, m, n) != oracle_matrix_element(op, m, n):
                    bad += 1
    return bad == 0, "%d mismatching matrix elements" % bad


def _suite_band(mutation):
    rng = random.Random(7)
    bad = 0
    for _ in range(3):
        op = random_operator(rng)
        beta = compute_beta(op)
        for m in range(30):
            for n in range(30):
                if abs(m - n) > beta.ell0 and matrix_element(beta, m, n):
                    bad += 1
    return bad == 0, "%d nonzero entries outside the band" % bad


def _suite_kernel(mutation):
    op = ex1_operator()
    beta = compute_beta(op)
    N = 30
    basis = extend_recursion(initial_basis(beta), beta, N)
    bad = [i for i, v in enumerate(basis.vectors) if band_residual(beta, v, N)]
    ok = not bad and basis.D == beta.p0
    return ok, "D=%d, %d vectors with nonzero residual" % (basis.D, len(bad))


def _suite_qortho(mutation):
    rng = random.Random(11)
    h = 8
    bad = 0
    for _ in range(10):
        D = rng.randint(2, 4)
        vs = random_gaussian_basis(rng, D, rng.randint(D, 12))
        G = gram_matrix(vs)
        gp = GramPair.identity(G, G)
        reduce_preliminary(gp, "QN", 0, max_iterations=1000)
        reduce_strong(gp, "QN", h, 0, max_iterations=1000)
        F = gp.p
        for j in range(D):
            for l in range(j):
                z = F[j][l]
                if not h * h * (z[0] ** 2 + z[1] ** 2) < F[j][j][0] * F[l][l][0]:
                    bad += 1
    return bad == 0, "%d pairs above the cosine bound" % bad


def _suite_halting(mutation):
    rng = random.Random(13)
    from .errors import IterationCapExceeded

    for _ in range(10):
        D = rng.randint(2, 5)
        vs = random_gaussian_basis(rng, D, 20, span=10 ** 6)
        G = gram_matrix(vs)
        gp = GramPair.identity(G, G)
        try:
            reduce_strong(gp, "QN", 64, 0, max_iterations=10 ** 4)
        except IterationCapExceeded:
            return False, "a reduction did not halt within the cap"
    return True, "all reductions halted"


def _suite_endpoint(mutation):
    op = ex1_operator()
    beta = compute_beta(op)
    N = 47
    basis = extend_recursion(initial_basis(beta), beta, N)
    spec = WeightSpec.make(N, op.k0)
    sol = run_pipeline(basis, spec, OrthoParams())
    ev = EvaluatedSolution.make([GaussianRational(x, y) for x, y in sol.G_trunc[0]], op.k0)
    r2 = ratio_coeffs(ev, 2, 0, conjugate=True)
    r1 = ratio_coeffs(ev, 1, 0)
    ok = r2 == GaussianRational(Fraction(-42251, 28561), Fraction(41166, 28561)) and r1 == 1
    return ok, "f2/f0=%s f1/f0=%s" % (r2, r1)


def _suite_arith(mutation):
    cases = [
        gauss_round(GaussianRational(Fraction(5, 2), Fraction(-3, 2))) == GaussianRational(2, -1),
        gauss_round(GaussianRational(Fraction(7, 3), Fraction(-5, 3))) == GaussianRational(2, -2),
        decimal_render(Fraction(1, 4), 1, 3) == "0.250",
        decimal_render(1, 2, 6) == "1.41421",
    ]
    return all(cases), "%d of %d rounding cases hold" % (sum(cases), len(cases))


SUITES = [
    ("recursion-identities", _suite_recursion),
    ("oracle-equivalence", _suite_oracle),
    ("band-structure", _suite_band),
    ("kernel-residual", _suite_kernel),
    ("quasi-orth-postconditions", _suite_qortho),
    ("halting", _suite_halting),
    ("exact-endpoint", _suite_endpoint),
    ("exact-rounding", _suite_arith),
]


def run_selftest(mutation=""):
    suites = []
    for name, fn in SUITES:
        try:
            ok, detail = fn(mutation)
        except Exception as exc:  # a crash is a failure of that suite
            ok, detail = False, "%s: %s" % (type(exc).__name__, exc)
        suites.append({"name": name, "passed": bool(ok), "detail": detail})
    return {"passed": all(s["passed"] for s in suites), "suites": suites}
