"""Rational wavepacket functions

    psi_{k,a}(x) = (x + i)^-(k+1) * ((x - i)/(x + i))^a

together with the index map between the unilateral index n >= 0 and the
bilateral index a in Z, exact point values, the three-term identities that
link neighbouring levels k, and the closed form of their L2 inner product.
"""

from fractions import Fraction
from math import factorial

from .arith import GaussianRational, to_fraction

__all__ = [
    "bilateral_index",
    "unilateral_index",
    "psi_eval",
    "l2_inner_psi",
    "check_recursion_identities",
]


def bilateral_index(k, n):
    """Bilateral index of the n-th basis function at level k.

    The sequence alternates around -(k+1)/2, e.g. for k=2: -2, -1, -3, 0, -4, ...
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    sign = -1 if (n + k + 1) % 2 else 1
    return (-(k + 1)) // 2 + sign * ((n + 1) // 2)


def unilateral_index(k, a):
    """Inverse of bilateral_index: the n >= 0 with bilateral_index(k, n) == a."""
    c = (-(k + 1)) // 2
    t = a - c
    if t == 0:
        return 0
    # candidates n = 2|t| - 1 and n = 2|t|, whichever carries the right sign
    for n in (2 * abs(t) - 1, 2 * abs(t)):
        if bilateral_index(k, n) == a:
            return n
    raise AssertionError("index map is not a bijection")  # pragma: no cover


def _cayley_power(x, a):
    """((x - i)/(x + i))^a for rational x."""
    x = to_fraction(x)
    z = GaussianRational(x, -1) / GaussianRational(x, 1)
    if a >= 0:
        return z ** a
    return z.conj() ** (-a)


def psi_eval(k, a, x):
    """Exact value of psi_{k,a}(x) at a rational point x."""
    x = to_fraction(x)
    w = GaussianRational(x, 1)
    if k + 1 >= 0:
        front = GaussianRational(1) / w ** (k + 1)
    else:
        front = w ** (-(k + 1))
    return front * _cayley_power(x, a)


def l2_inner_psi(k, n, np_):
    """(psi_{k,n}, psi_{k,np}) / pi in the plain L2 inner product."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    d = n - np_
    if abs(d) > k:
        return Fraction(0)
    sign = -1 if d % 2 else 1
    return Fraction(sign * factorial(2 * k), 4 ** k * factorial(k + d) * factorial(k - d))


def _psi_derivative(k, a, x, shift=1):
    """d/dx psi_{k,a} at x from the two-factor closed form.

    psi_{k,a} = (x + i)^(-(k+1)-a) (x - i)^a, so the product rule gives
    psi' = a (x+i)^(-(k+1)-a)(x-i)^(a-1) - (k+1+a)(x+i)^(-(k+2)-a)(x-i)^a.
    ``shift`` is the coefficient offset (1 in the true formula); the test
    suite uses other values as a mutation check.
    """
    x = to_fraction(x)
    p = GaussianRational(x, 1)
    m = GaussianRational(x, -1)
    e1 = -(k + 1) - a
    t1 = p ** e1 * m ** (a - 1) * a if a != 0 else GaussianRational(0)
    t2 = p ** (e1 - 1) * m ** a * (k + shift + a)
    return t1 - t2


def check_recursion_identities(k, a, samples, _diff_shift=1):
    """Check the three level-changing identities at every sample point.

    * psi_{k,a} = -(i/2) (psi_{k-1,a} - psi_{k-1,a+1})
    * x psi_{k,a} = (1/2) (psi_{k-1,a} + psi_{k-1,a+1})
    * psi_{k,a}' = a psi_{k+1,a-1} - (a + k + 1) psi_{k+1,a}

    The derivative on the left is taken from the closed form, independently
    of the right hand side. ``_diff_shift`` replaces the ``+1`` in
    ``a + k + 1`` on the right hand side (mutation hook for tests).
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample point")
    half_i = GaussianRational(0, Fraction(1, 2))
    half = Fraction(1, 2)
    for x in samples:
        x = to_fraction(x)
        lhs = psi_eval(k, a, x)
        lo0 = psi_eval(k - 1, a, x)
        lo1 = psi_eval(k - 1, a + 1, x)
        if lhs != -half_i * (lo0 - lo1):
            return False
        if lhs * x != (lo0 + lo1) * half:
            return False
        d = _psi_derivative(k, a, x)
        rhs = psi_eval(k + 1, a - 1, x) * a - psi_eval(k + 1, a, x) * (a + k + _diff_shift)
        if d != rhs:
            return False
    return True
