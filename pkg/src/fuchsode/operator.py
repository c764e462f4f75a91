"""Differential operators Q(x, d/dx) = sum_m q_m(x) (d/dx)^m with Gaussian
rational polynomial coefficients, and their band matrices in the wavepacket
bases.

Applying Q to psi_{k0,a} gives a finite combination

    Q psi_{k0,a} = sum_r (sum_s beta[r][s] a^s) psi_{k0d,a+r}

whose coefficients are polynomials in a. ``compute_beta`` builds that table
once; ``matrix_element`` reads any b_m^n from it.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .arith import GaussianRational, format_complex, parse_complex, to_gaussian
from .basis import bilateral_index
from .errors import NegativeIterationCount, SingularAtI, SpaceMismatch

__all__ = [
    "ODEOperator",
    "BetaTable",
    "poly_degree",
    "poly_eval",
    "validate_operator",
    "compute_beta",
    "matrix_element",
    "row_index",
]

_ZERO = GaussianRational(0)
_HALF = Fraction(1, 2)
_HALF_I = GaussianRational(0, Fraction(1, 2))


def poly_degree(p):
    """Degree of a coefficient list, None for the zero polynomial."""
    for j in range(len(p) - 1, -1, -1):
        if p[j]:
            return j
    return None


def poly_eval(p, z):
    z = to_gaussian(z)
    acc = GaussianRational(0)
    for c in reversed(p):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class ODEOperator:
    """Q = sum_{m=0}^{M} q_m(x) (d/dx)^m acting from level k0 to level k0d.

    ``polys[m][j]`` is the coefficient of x^j in q_m.
    """

    M: int
    polys: tuple
    k0: int
    k0d: int

    def __post_init__(self):
        polys = tuple(tuple(to_gaussian(c) for c in p) for p in self.polys)
        object.__setattr__(self, "polys", polys)

    @classmethod
    def from_json(cls, obj):
        polys = [[parse_complex(c) for c in p] for p in obj["q"]]
        return cls(int(obj["M"]), polys, int(obj["k0"]), int(obj["k0d"]))

    def to_json(self):
        return {
            "M": self.M,
            "k0": self.k0,
            "k0d": self.k0d,
            "q": [[format_complex(c) for c in p] for p in self.polys],
        }

    def monomials(self):
        """Yield (m, j, q_{m,j}) for every nonzero coefficient."""
        for m, p in enumerate(self.polys):
            for j, c in enumerate(p):
                if c:
                    yield m, j, c

    def max_excess(self):
        """max_m (deg q_m - m) over the nonzero q_m."""
        vals = [d - m for m, d in ((m, poly_degree(p)) for m, p in enumerate(self.polys)) if d is not None]
        return max(vals)

    def __add__(self, other):
        if (self.k0, self.k0d) != (other.k0, other.k0d):
            raise ValueError("operators act between different spaces")
        M = max(self.M, other.M)
        polys = []
        for m in range(M + 1):
            a = list(self.polys[m]) if m <= self.M else []
            b = list(other.polys[m]) if m <= other.M else []
            n = max(len(a), len(b))
            a += [_ZERO] * (n - len(a))
            b += [_ZERO] * (n - len(b))
            polys.append([x + y for x, y in zip(a, b)])
        return ODEOperator(M, polys, self.k0, self.k0d)


def validate_operator(op):
    """Raise SingularAtI or SpaceMismatch if Q cannot be used."""
    if op.M < 0 or len(op.polys) != op.M + 1:
        raise ValueError("need exactly M+1 coefficient polynomials")
    if op.k0 < 0:
        raise SpaceMismatch("k0 must be nonnegative")
    qM = op.polys[op.M]
    if poly_degree(qM) is None:
        raise SingularAtI("leading coefficient q_M is identically zero")
    for z in (GaussianRational(0, 1), GaussianRational(0, -1)):
        if not poly_eval(qM, z):
            raise SingularAtI("q_M vanishes at %s" % z)
    bound = op.k0 - op.max_excess()
    if op.k0d > bound:
        raise SpaceMismatch("k0d = %d exceeds k0 - max(deg q_m - m) = %d" % (op.k0d, bound))


@dataclass(frozen=True)
class BetaTable:
    """beta[r][s] for r in [-M, M + k0 - k0d], s in [0, M]; zero elsewhere."""

    M: int
    k0: int
    k0d: int
    entries: tuple = field(repr=False)

    @property
    def r_min(self):
        return -self.M

    @property
    def r_max(self):
        return self.M + self.k0 - self.k0d

    @property
    def ell0(self):
        return 2 * self.M + self.k0 - self.k0d

    @property
    def j0(self):
        return max(self.k0d, 0)

    @property
    def p0(self):
        return self.j0 + self.ell0 - 1

    def get(self, r, s):
        if r < self.r_min or r > self.r_max or s < 0 or s > self.M:
            return _ZERO
        return self.entries[r - self.r_min][s]

    def poly(self, r):
        """Coefficients (in powers of the column's bilateral index) for offset r."""
        if r < self.r_min or r > self.r_max:
            return ()
        return self.entries[r - self.r_min]

    def __add__(self, other):
        if (self.M, self.k0, self.k0d) != (other.M, other.k0, other.k0d):
            raise ValueError("tables have different shapes")
        rows = tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries))
        return BetaTable(self.M, self.k0, self.k0d, rows)


def compute_beta(op, _diff_shift=1):
    """Build the beta table of ``op``.

    Each monomial q_{m,j} x^j (d/dx)^m is pushed through m derivative steps
    (level k0 -> k0+m), j multiplications by x and k0 - k0d - j + m identity
    steps (each lowering the level by one) until level k0d is reached.
    Working arrays span the whole stored range with implicit zeros.
    ``_diff_shift`` is a mutation hook for the self test (1 is correct).
    """
    M, k0, k0d = op.M, op.k0, op.k0d
    r_lo, r_hi = -M, M + k0 - k0d
    width = r_hi - r_lo + 1
    beta = [[_ZERO] * (M + 1) for _ in range(width)]

    def at(alpha, r, s):
        if r < r_lo or r > r_hi or s < 0 or s > M:
            return _ZERO
        return alpha[r - r_lo][s]

    for m, j, q in op.monomials():
        passes = k0 - k0d - j + m
        if passes < 0:
            raise NegativeIterationCount(
                "term x^%d d^%d needs %d identity steps" % (j, m, passes))
        alpha = [[_ZERO] * (M + 1) for _ in range(width)]
        alpha[-r_lo][0] = GaussianRational(1)
        kappa = k0
        for _ in range(m):
            new = [[_ZERO] * (M + 1) for _ in range(width)]
            for r in range(r_lo, r_hi + 1):
                for s in range(M + 1):
                    v = (at(alpha, r + 1, s) * (r + 1)
                         - at(alpha, r, s) * (r + kappa + _diff_shift)
                         + at(alpha, r + 1, s - 1)
                         - at(alpha, r, s - 1))
                    new[r - r_lo][s] = v
            alpha = new
            kappa += 1
        for _ in range(j):
            alpha = [[(at(alpha, r - 1, s) + at(alpha, r, s)) * _HALF for s in range(M + 1)]
                     for r in range(r_lo, r_hi + 1)]
        for _ in range(passes):
            alpha = [[(at(alpha, r - 1, s) - at(alpha, r, s)) * _HALF_I for s in range(M + 1)]
                     for r in range(r_lo, r_hi + 1)]
        for r in range(width):
            for s in range(M + 1):
                if alpha[r][s]:
                    beta[r][s] = beta[r][s] + q * alpha[r][s]
    return BetaTable(M, k0, k0d, tuple(tuple(row) for row in beta))


def row_index(beta, m):
    """Bilateral index of the m-th test function psi_{k0d, .}."""
    return bilateral_index(beta.k0d, m)


def matrix_element(beta, m, n):
    """b_m^n: coefficient of the m-th level-k0d basis function in Q e_n."""
    a = bilateral_index(beta.k0, n)
    coeffs = beta.poly(row_index(beta, m) - a)
    acc = GaussianRational(0)
    for c in reversed(coeffs):
        acc = acc * a + c
    return acc
