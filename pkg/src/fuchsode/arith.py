"""Exact scalar arithmetic: Gaussian rationals and integers, rounding to the
nearest Gaussian integer, exact ratio comparison and decimal rendering.

Rationals are ``fractions.Fraction`` throughout (always in lowest terms with a
positive denominator). Complex values carry Fraction or int parts.
"""

from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational

from .errors import ContractViolation

__all__ = [
    "GaussianRational",
    "GaussianInteger",
    "to_fraction",
    "to_gaussian",
    "gauss_round",
    "cmp_sq_ratio",
    "decimal_render",
    "sqrt_bounds",
    "parse_rational",
    "format_rational",
    "parse_complex",
    "format_complex",
    "lcm",
]


def lcm(a, b):
    return a // gcd(a, b) * b


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError("cannot convert %r to a rational" % (x,))


def parse_rational(s):
    """Parse ``"a/b"`` or ``"a"`` into a Fraction. Floats are refused."""
    if isinstance(s, bool):
        raise ValueError("not a rational literal: %r" % (s,))
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError("not a rational literal: %r" % (s,))
    t = s.strip()
    if "/" in t:
        a, b = t.split("/", 1)
        num, den = int(a), int(b)
        if den == 0:
            raise ValueError("zero denominator in %r" % (s,))
        return Fraction(num, den)
    return Fraction(int(t))


def format_rational(x):
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


class GaussianRational:
    """Complex number re + i*im with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_fraction(re)
        self.im = to_fraction(im)

    @classmethod
    def _raw(cls, re, im):
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    # conversions ---------------------------------------------------------
    def conj(self):
        return GaussianRational._raw(self.re, -self.im)

    def norm(self):
        """Squared modulus |z|^2 as a Fraction."""
        return self.re * self.re + self.im * self.im

    def is_integer(self):
        return self.re.denominator == 1 and self.im.denominator == 1

    def denominator(self):
        return lcm(self.re.denominator, self.im.denominator)

    def to_gaussian_integer(self):
        if not self.is_integer():
            raise ValueError("%r is not a Gaussian integer" % (self,))
        return GaussianInteger(self.re.numerator, self.im.numerator)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b, c, d = self.re, self.im, o.re, o.im
        return GaussianRational._raw((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return GaussianRational(1) / (self ** (-e))
        result = GaussianRational._raw(Fraction(1), Fraction(0))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # comparison ----------------------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (format_rational(self.re), format_rational(self.im))

    def __str__(self):
        if self.im == 0:
            return format_rational(self.re)
        sign = "-" if self.im < 0 else "+"
        return "%s%s%si" % (format_rational(self.re), sign, format_rational(abs(self.im)))


class GaussianInteger(GaussianRational):
    """Gaussian rational whose parts are integers.

    Stored as Fractions with denominator one so that it mixes freely with
    GaussianRational; the integer parts are exposed as ``a`` and ``b``.
    """

    __slots__ = ()

    def __init__(self, re=0, im=0):
        if not isinstance(re, int) or not isinstance(im, int):
            re, im = to_fraction(re), to_fraction(im)
            if re.denominator != 1 or im.denominator != 1:
                raise ValueError("Gaussian integer needs integer parts")
        super().__init__(re, im)

    @property
    def a(self):
        return self.re.numerator

    @property
    def b(self):
        return self.im.numerator

    def __repr__(self):
        return "GaussianInteger(%d, %d)" % (self.a, self.b)


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational._raw(Fraction(x), Fraction(0))
    if isinstance(x, complex):
        return NotImplemented
    return NotImplemented


def to_gaussian(x):
    """Convert ints, Fractions, strings or {"re","im"} dicts to GaussianRational."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, dict):
        return parse_complex(x)
    return GaussianRational(to_fraction(x), 0)


def parse_complex(obj):
    """Parse a rational literal or a {"re": ..., "im": ...} object."""
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise ValueError("unknown keys in complex literal: %s" % sorted(extra))
        return GaussianRational(parse_rational(obj.get("re", "0")), parse_rational(obj.get("im", "0")))
    return GaussianRational(parse_rational(obj), 0)


def format_complex(z):
    z = to_gaussian(z)
    if z.im == 0:
        return format_rational(z.re)
    return {"re": format_rational(z.re), "im": format_rational(z.im)}


def _sgn(x):
    return (x > 0) - (x < 0)


def _round_half_to_zero(x):
    # -sgn(x) * floor(1/2 - |x|), exactly
    ax = abs(x)
    return -_sgn(x) * ((ax.denominator - 2 * ax.numerator) // (2 * ax.denominator))


def gauss_round(z):
    """Nearest Gaussian integer to z, halves rounded toward zero."""
    z = to_gaussian(z)
    return GaussianInteger(_round_half_to_zero(z.re), _round_half_to_zero(z.im))


def cmp_sq_ratio(aN, aD, bN, bD):
    """Compare aN/aD with bN/bD; returns -1, 0 or 1."""
    aN, aD, bN, bD = (to_fraction(t) for t in (aN, aD, bN, bD))
    if aD <= 0 or bD <= 0:
        raise ContractViolation("denominators must be positive")
    if aN < 0 or bN < 0:
        raise ContractViolation("numerators must be nonnegative")
    return _sgn(aN * bD - bN * aD)


def sqrt_bounds(q, bits=128):
    """Rational lo <= sqrt(q) <= hi with hi - lo <= 2**-bits."""
    q = to_fraction(q)
    if q < 0:
        raise ContractViolation("square root of a negative number")
    scale = 1 << bits
    t = q * scale * scale
    r = isqrt(t.numerator // t.denominator)
    lo = Fraction(r, scale)
    if r * r * t.denominator == t.numerator:
        return lo, lo
    return lo, Fraction(r + 1, scale)


def _log10_floor_sq(A):
    """floor(log10(sqrt(A))) for a positive rational A."""
    num, den = A.numerator, A.denominator
    # estimate from bit lengths, then correct
    e = int((num.bit_length() - den.bit_length()) * 0.15051499783199057)
    while True:
        lo = Fraction(10) ** (2 * e)
        if A < lo:
            e -= 1
            continue
        if A >= lo * 100:
            e += 1
            continue
        return e


def _root_round(T, rounding):
    """Round sqrt(T) to an integer; T a nonnegative rational."""
    r = isqrt(T.numerator // T.denominator)
    if rounding == "nearest":
        # sqrt(T) >= r + 1/2  <=>  4T >= (2r+1)^2
        if 4 * T.numerator >= (2 * r + 1) ** 2 * T.denominator:
            r += 1
    elif rounding == "up":
        if r * r * T.denominator != T.numerator:
            r += 1
    elif rounding != "down":
        raise ValueError("unknown rounding mode %r" % (rounding,))
    return r


def decimal_render(x, sqrt_factor=1, digits=20, rounding="nearest"):
    """Render x*sqrt(sqrt_factor) with ``digits`` significant digits.

    ``rounding`` is "nearest" (ties away from zero), "ceiling" or "floor"
    (directed on the signed value). Very large or very small magnitudes are
    written in scientific notation.
    """
    x = to_fraction(x)
    s = to_fraction(sqrt_factor)
    if s < 0:
        raise ContractViolation("sqrt_factor must be nonnegative")
    if digits < 1:
        raise ContractViolation("digits must be positive")
    if x == 0 or s == 0:
        return "0." + "0" * (digits - 1) if digits > 1 else "0"
    negative = x < 0
    if rounding == "nearest":
        mag_mode = "nearest"
    elif rounding == "ceiling":
        mag_mode = "down" if negative else "up"
    elif rounding == "floor":
        mag_mode = "up" if negative else "down"
    else:
        raise ValueError("unknown rounding mode %r" % (rounding,))
    A = x * x * s
    e = _log10_floor_sq(A)
    while True:
        d = digits - 1 - e
        T = A * Fraction(10) ** (2 * d)
        R = _root_round(T, mag_mode)
        if R >= 10 ** digits:
            e += 1
            continue
        break
    sign = "-" if negative else ""
    if e < -5 or e >= max(digits, 21):
        ds = str(R)
        mant = ds[0] + ("." + ds[1:] if len(ds) > 1 else "")
        return "%s%se%+03d" % (sign, mant, e)
    if d <= 0:
        return sign + str(R * 10 ** (-d))
    ip, fp = divmod(R, 10 ** d)
    return "%s%d.%0*d" % (sign, ip, d, fp)
