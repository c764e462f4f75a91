"""Independent reference computations used by the tests.

* matrix elements by pushing one concrete basis function through the level
  identities (no polynomial-in-index bookkeeping);
* the closed-form solutions of the bundled examples and their exact
  expansion coefficients;
* an estimate of the truncation tail delta_K from a larger solve.
"""

from fractions import Fraction
from math import factorial

from .arith import GaussianRational, to_fraction
from .basis import bilateral_index
from .operator import ODEOperator, validate_operator

__all__ = [
    "oracle_matrix_element",
    "oracle_true_solution_ex1",
    "ex1_operator",
    "two_solution_operator",
    "laguerre_operator",
    "laguerre_poly",
    "laguerre_ratio_truth",
    "ex1_true_coefficients",
    "oracle_delta_K",
    "delta_from_sq",
]

_HALF = Fraction(1, 2)
_HALF_I = GaussianRational(0, Fraction(1, 2))


def _add(expansion, a, v):
    if v:
        w = expansion.get(a, GaussianRational(0)) + v
        if w:
            expansion[a] = w
        else:
            expansion.pop(a, None)


def _apply_monomial(m, j, passes, k0, a0):
    """Expansion of x^j (d/dx)^m psi_{k0,a0} at level k0 + m - j - passes."""
    exp = {a0: GaussianRational(1)}
    k = k0
    for _ in range(m):
        new = {}
        for a, v in exp.items():
            # psi_{k,a}' = a psi_{k+1,a-1} - (a+k+1) psi_{k+1,a}
            _add(new, a - 1, v * a)
            _add(new, a, v * (-(a + k + 1)))
        exp = new
        k += 1
    for _ in range(j):
        new = {}
        for a, v in exp.items():
            # x psi_{k,a} = (psi_{k-1,a} + psi_{k-1,a+1}) / 2
            _add(new, a, v * _HALF)
            _add(new, a + 1, v * _HALF)
        exp = new
        k -= 1
    for _ in range(passes):
        new = {}
        for a, v in exp.items():
            # psi_{k,a} = -(i/2) psi_{k-1,a} + (i/2) psi_{k-1,a+1}
            _add(new, a, -_HALF_I * v)
            _add(new, a + 1, _HALF_I * v)
        exp = new
        k -= 1
    return exp, k


def oracle_matrix_element(op, m, n):
    """b_m^n computed from the concrete expansion of Q psi_{k0, a_n}."""
    validate_operator(op)
    a = bilateral_index(op.k0, n)
    target = bilateral_index(op.k0d, m)
    total = GaussianRational(0)
    for mm, j, q in op.monomials():
        passes = op.k0 - op.k0d - j + mm
        exp, level = _apply_monomial(mm, j, passes, op.k0, a)
        assert level == op.k0d
        v = exp.get(target)
        if v:
            total = total + q * v
    return total


# example problems ----------------------------------------------------------

def ex1_operator(k0=2, k0d=2):
    """(9x^2 - 6x + 5) f'' + (90x - 30) f' + 126 f."""
    return ODEOperator(2, [[126], [-30, 90], [5, -6, 9]], k0, k0d)


def two_solution_operator():
    """(x^2 + 4) f'' + 4x f' + 2 f, i.e. ((x^2+4) f)'' = 0.

    Its square-integrable solutions are spanned by 1/(x^2+4) and x/(x^2+4).
    """
    return ODEOperator(2, [[2], [0, 4], [4, 0, 1]], 0, 0)


def laguerre_operator(c=30, mu=4, nu=3, k0=0):
    """u^2 g'' + u g' + (-c^4 u^4 + c^2 (4 nu + 2 mu + 2) u^2 - mu^2) g.

    g(u) = f((cu)^2) where f(x) = x^(mu/2) e^(-x/2) L_nu^mu(x).
    """
    q0 = [-mu * mu, 0, c * c * (4 * nu + 2 * mu + 2), 0, -c ** 4]
    return ODEOperator(2, [q0, [0, 1], [0, 0, 1]], k0, k0 - 4)


def oracle_true_solution_ex1(x):
    x = to_fraction(x)
    t = 3 * x - 1
    return t / (t * t + 4) ** 4


def laguerre_poly(nu, mu, x):
    """Generalized Laguerre polynomial L_nu^mu(x) from its explicit sum."""
    x = to_fraction(x)
    return sum(Fraction((-1) ** j * factorial(nu + mu), factorial(nu - j) * factorial(mu + j))
               * x ** j / factorial(j) for j in range(nu + 1))


def laguerre_ratio_truth(x0, x1, mu=4, nu=3, dps=60):
    """f(x0)/f(x1) for f(x) = x^(mu/2) e^(-x/2) L_nu^mu(x), even mu, via mpmath."""
    import mpmath

    if mu % 2:
        raise ValueError("only even mu keeps the algebraic factor rational")
    x0, x1 = to_fraction(x0), to_fraction(x1)
    r = (x0 / x1) ** (mu // 2) * laguerre_poly(nu, mu, x0) / laguerre_poly(nu, mu, x1)
    with mpmath.workdps(dps):
        return mpmath.mpf(r.numerator) / r.denominator * mpmath.exp(
            -(mpmath.mpf(x0.numerator) / x0.denominator - mpmath.mpf(x1.numerator) / x1.denominator) / 2)


def _binom(e, j):
    num = 1
    for t in range(j):
        num *= e - t
    return Fraction(num, factorial(j))


def _series(gamma, e, order):
    """Taylor coefficients of (gamma + t)^e up to t^order."""
    base = gamma ** e if e >= 0 else GaussianRational(1) / gamma ** (-e)
    inv = GaussianRational(1) / gamma
    out = []
    p = GaussianRational(1)
    for j in range(order + 1):
        out.append(base * p * _binom(e, j))
        p = p * inv
    return out


def _mul_series(a, b, order):
    out = [GaussianRational(0)] * (order + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= order:
                out[i + j] = out[i + j] + x * y
    return out


def ex1_true_coefficients(count, k0=2):
    """Exact expansion coefficients of the first example's true solution.

    Returns values proportional (with one common real factor) to the
    level-k0 weighted inner products (weight (1+x^2)^k0) of f with
    psi_{k0, a_n} for n < count, where
    f = (3x-1)/((3x-1)^2+4)^4 = (3x-1) / (9^4 (x-al)^4 (x-al')^4).
    Each coefficient is an integral of a rational function, evaluated by the
    residue at the single order-4 pole in the half plane that is closed.
    """
    al = GaussianRational(Fraction(1, 3), Fraction(2, 3))
    alc = al.conj()
    i = GaussianRational(0, 1)
    out = []
    for n in range(count):
        a = bilateral_index(k0, n)
        e1, e2 = k0 + a, -1 - a
        if a >= 0:
            beta, other, sign = alc, al, -1
        else:
            beta, other, sign = al, alc, 1
        s = [beta * 3 - 1, GaussianRational(3)]
        s = _mul_series(s, _series(beta + i, e1, 3), 3)
        s = _mul_series(s, _series(beta - i, e2, 3), 3)
        s = _mul_series(s, _series(beta - other, -4, 3), 3)
        res = s[3] / 9 ** 4
        out.append(res * i * sign)
    return out


def oracle_delta_K(problem, K, N_ref):
    """Estimate of delta_K^2 = |tail|^2 / |head|^2 from a solve at N_ref.

    The selected vectors of the reference solve stand in for the true
    solutions; the largest squared tail ratio among them is returned exactly.
    Take an outward square root (``delta_from_sq``) before using it in the
    bound. This is an estimate, not a certified bound.
    """
    from .solver import solve

    if K >= N_ref:
        return Fraction(0)
    ref = problem.with_solver(N=N_ref, K=None, J=None, compute_bound_data=False)
    result = solve(ref)
    worst = Fraction(0)
    for v in result.solution.G:
        head = sum(x * x + y * y for x, y in v[:K + 1])
        tail = sum(x * x + y * y for x, y in v[K + 1:])
        if head:
            worst = max(worst, Fraction(tail, head))
    return worst


def delta_from_sq(delta_sq, bits=128):
    """Rational upper bound of sqrt(delta_sq)."""
    from .arith import sqrt_bounds

    return sqrt_bounds(delta_sq, bits)[1]
