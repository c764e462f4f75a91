"""Point values, ratios, normalization, digit counting and plot rows.

A coefficient vector c_0..c_N stands for

    raw:      f(x) = pi^(-1/2) * sum_n c_n psi_{k0, a_n}(x)
    standard: f(x) =           sum_n c_n psi_{k0, a_n}(x)

where a_n is the bilateral index of n. The factor pi^(-1/2) never enters
exact arithmetic; it is applied only when rendering decimals.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd, inf, isqrt

from .arith import GaussianRational, to_fraction, to_gaussian
from .basis import bilateral_index, unilateral_index
from .errors import DegenerateNormalization, DivisionByZeroCoeff, DivisionByZeroValue

__all__ = [
    "EvaluatedSolution",
    "eval_at",
    "ratio_points",
    "ratio_coeffs",
    "normalize_standard",
    "significant_digits",
    "log10_floor",
    "parse_grid",
    "render_value",
    "emit_plot_data",
    "INF",
]

INF = inf


@dataclass(frozen=True)
class EvaluatedSolution:
    coeffs: tuple
    k0: int
    normalization: str = "raw"

    @classmethod
    def make(cls, coeffs, k0, normalization="raw"):
        return cls(tuple(c if isinstance(c, GaussianRational) else to_gaussian(c) for c in coeffs),
                   k0, normalization)


def eval_at(sol, x):
    """sum_n c_n psi_{k0,a_n}(x), exactly.

    With x = p/q, write u = p - iq and s = p^2 + q^2; then
    ((x-i)/(x+i))^a = u^(2a)/s^a for a >= 0 and conj(u)^(2|a|)/s^|a| for a < 0,
    and (x+i)^-(k0+1) = q^(k0+1) u^(k0+1) / s^(k0+1). Everything is summed
    over the common denominator s^A with A = max |a|.
    """
    x = to_fraction(x)
    coeffs = sol.coeffs
    if not any(coeffs):
        return GaussianRational(0)
    L = 1
    for c in coeffs:
        L = L * c.denominator() // gcd(L, c.denominator())
    p, q = x.numerator, x.denominator
    s = p * p + q * q
    idx = [bilateral_index(sol.k0, n) for n in range(len(coeffs))]
    A = max(abs(a) for a in idx)
    u2 = _cmul((p, -q), (p, -q))
    ub2 = _cmul((p, q), (p, q))
    pos = [(1, 0)]
    neg = [(1, 0)]
    top_pos = max(a for a in idx) if idx else 0
    top_neg = max(-a for a in idx) if idx else 0
    for _ in range(max(top_pos, 0)):
        pos.append(_cmul(pos[-1], u2))
    for _ in range(max(top_neg, 0)):
        neg.append(_cmul(neg[-1], ub2))
    spow = [1]
    for _ in range(A):
        spow.append(spow[-1] * s)
    tx = ty = 0
    for c, a in zip(coeffs, idx):
        if not c:
            continue
        cx, cy = int(c.re * L), int(c.im * L)
        w = pos[a] if a >= 0 else neg[-a]
        f = spow[A - abs(a)]
        wx, wy = w[0] * f, w[1] * f
        tx += cx * wx - cy * wy
        ty += cx * wy + cy * wx
    k1 = sol.k0 + 1
    if k1 < 0:
        raise ValueError("k0 must be nonnegative")
    front = _cmul((q ** k1, 0), _cpow((p, -q), k1))
    den = s ** (A + k1) * L
    num = _cmul(front, (tx, ty))
    return GaussianRational(Fraction(num[0], den), Fraction(num[1], den))


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cpow(a, e):
    r = (1, 0)
    while e:
        if e & 1:
            r = _cmul(r, a)
        e >>= 1
        if e:
            a = _cmul(a, a)
    return r


def ratio_points(sol, x0, x1):
    """f(x0)/f(x1); the normalization constant cancels."""
    den = eval_at(sol, x1)
    if not den:
        raise DivisionByZeroValue("solution vanishes at %s" % (x1,))
    return eval_at(sol, x0) / den


def ratio_coeffs(sol, n, m, conjugate=False):
    """c_n / c_m, or its complex conjugate when ``conjugate`` is set.

    The conjugate form is the same ratio expressed in the conjugate basis
    psi-bar, which is how some published tables list coefficients.
    """
    cm = sol.coeffs[m] if m < len(sol.coeffs) else GaussianRational(0)
    if not cm:
        raise DivisionByZeroCoeff("coefficient %d is zero" % m)
    cn = sol.coeffs[n] if n < len(sol.coeffs) else GaussianRational(0)
    r = cn / cm
    return r.conj() if conjugate else r


def normalize_standard(sol):
    """Rescale so that <f, (psi_{k0,0} + psi_{k0,-k0-1}) / (2 pi)> = 1.

    In terms of the expansion f = sum c_n psi this is c_{n0} + c_{n1} = 2
    for the two positions n0, n1 carrying bilateral indices 0 and -k0-1.
    """
    k0 = sol.k0
    n0, n1 = unilateral_index(k0, 0), unilateral_index(k0, -k0 - 1)
    get = lambda n: sol.coeffs[n] if n < len(sol.coeffs) else GaussianRational(0)
    total = get(n0) + get(n1)
    if not total:
        raise DegenerateNormalization("normalizing functional vanishes")
    scale = GaussianRational(2) / total
    return replace(sol, coeffs=tuple(c * scale for c in sol.coeffs), normalization="standard")


def log10_floor(x):
    """floor(log10(x)) for a positive rational."""
    x = to_fraction(x)
    if x <= 0:
        raise ValueError("log10 of a nonpositive number")
    e = int((x.numerator.bit_length() - x.denominator.bit_length()) * 0.30102999566398120)
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    return e


def _component_digits(a, r, scale_ref):
    if a == r:
        return INF
    E = log10_floor(abs(scale_ref))
    diff = abs(a - r)
    # largest q >= 0 with diff <= 10^(E+1-q) / 2
    if diff > Fraction(10) ** (E + 1) / 2:
        return 0
    t = Fraction(10) ** (E + 1) / (2 * diff)
    return log10_floor(t)


def significant_digits(a, ref):
    """Per-component significant digits of a against ref, as (re, im).

    A component of ref that is exactly zero is measured on the scale of |ref|
    (its largest component). Exact agreement gives INF.
    """
    a, ref = to_gaussian(a), to_gaussian(ref)
    if not ref:
        raise ValueError("reference must be nonzero")
    big = max(abs(ref.re), abs(ref.im))
    return (
        _component_digits(a.re, ref.re, ref.re if ref.re else big),
        _component_digits(a.im, ref.im, ref.im if ref.im else big),
    )


def parse_grid(spec):
    """Inclusive rational grid from ``"a:b:step"``."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("grid must look like a:b:step")
    a, b, st = (to_fraction(p) for p in parts)
    if st <= 0:
        raise ValueError("grid step must be positive")
    out = []
    x = a
    while x <= b:
        out.append(x)
        x += st
    return out


_PI_CACHE = {}


def _sqrt_pi_scaled(p):
    """isqrt(floor(pi * 10^(2p))), i.e. sqrt(pi) * 10^p rounded down."""
    if p not in _PI_CACHE:
        import mpmath

        with mpmath.workdps(2 * p + 20):
            v = int(mpmath.floor(mpmath.pi * mpmath.mpf(10) ** (2 * p)))
        _PI_CACHE[p] = isqrt(v)
    return _PI_CACHE[p]


def _fixed(x, places):
    """x rounded to ``places`` decimals (ties away from zero)."""
    scaled = abs(x) * 10 ** places
    n = int(scaled)
    if scaled - n >= Fraction(1, 2):
        n += 1
    sign = "-" if x < 0 and n else ""
    if places == 0:
        return sign + str(n)
    ip, fp = divmod(n, 10 ** places)
    return "%s%d.%0*d" % (sign, ip, places, fp)


def render_value(x, places, over_sqrt_pi):
    """Fixed-point rendering of x (times pi^(-1/2) when requested)."""
    x = to_fraction(x)
    if not over_sqrt_pi or x == 0:
        return _fixed(x, places)
    mag = max(0, log10_floor(abs(x)) + 1)
    p = places + mag + 10
    return _fixed(x * 10 ** p / _sqrt_pi_scaled(p), places)


def emit_plot_data(sol, grid, digits):
    """CSV lines ``x,re,im`` of f on the grid, ``digits`` decimal places."""
    over = sol.normalization == "raw"
    lines = ["x,re,im"]
    for x in grid:
        x = to_fraction(x)
        v = eval_at(sol, x)
        lines.append("%s,%s,%s" % (_fixed(x, digits), render_value(v.re, digits, over),
                                   render_value(v.im, digits, over)))
    return lines
