"""Weights and the two Hermitian forms used to rank candidate solutions.

* <f,g>_{Q,N} = sum_{n<=N} f_n conj(g_n) w_n  with integer weights w_n >= 1
* <f,g>_{l2,K} = sum_{n<=K} f_n conj(g_n)

The weights equal 1 up to K, grow geometrically (integer base) with the
distance mu_n of the bilateral index from the band centre, and stay on the
plateau R from J onwards.

Gram matrices of Gaussian-integer vectors are Gaussian integers; they are
kept as (re, im) int pairs.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import GaussianRational, to_gaussian
from .basis import bilateral_index

__all__ = [
    "WeightSpec",
    "default_K",
    "default_J",
    "mu",
    "weight",
    "weights",
    "inner_QN",
    "inner_l2K",
    "gram_matrix",
    "GramPair",
    "gram_init",
]


def default_K(N, k0):
    return 2 * (3 * N // 8) + k0


def default_J(N, k0):
    return 2 * (7 * N // 16) + k0


@dataclass(frozen=True)
class WeightSpec:
    N: int
    K: int
    J: int
    base: int = 10 ** 8
    k0: int = 0
    mu_sign: str = "symmetric"

    @classmethod
    def make(cls, N, k0, K=None, J=None, base=10 ** 8, mu_sign="symmetric"):
        K = default_K(N, k0) if K is None else K
        J = default_J(N, k0) if J is None else J
        return cls(N, K, J, base, k0, mu_sign)

    def check(self, p0):
        if not (self.N >= self.J >= self.K >= p0):
            raise ValueError("need N >= J >= K >= p0 (N=%d, J=%d, K=%d, p0=%d)"
                             % (self.N, self.J, self.K, p0))
        if self.base < 2:
            raise ValueError("weight base must be at least 2")


def mu(k0, n, mu_sign="symmetric"):
    """Distance of the bilateral index of e_n from the band centre."""
    a = bilateral_index(k0, n)
    h = Fraction(k0 + 1, 2)
    if mu_sign == "symmetric":
        v = abs(a + h) - h
    elif mu_sign == "printed":
        v = abs(a - h) - h
    else:
        raise ValueError("unknown mu_sign %r" % (mu_sign,))
    return int(v) if v.denominator == 1 else v


def _exponent(spec, n):
    muK = mu(spec.k0, spec.K, spec.mu_sign)
    top = max(0, mu(spec.k0, spec.J, spec.mu_sign) - muK)
    if n <= spec.K:
        return 0
    if n >= spec.J:
        return top
    return min(max(mu(spec.k0, n, spec.mu_sign) - muK, 0), top)


def weight(spec, n):
    """w_n as an exact rational (an integer power of the base)."""
    e = _exponent(spec, n)
    if isinstance(e, Fraction):
        raise ValueError("non-integral weight exponent")
    return Fraction(spec.base ** e)


def weights(spec):
    """Integer weights w_0..w_N."""
    return [int(weight(spec, n)) for n in range(spec.N + 1)]


def _get(v, n):
    return to_gaussian(v[n]) if n < len(v) else GaussianRational(0)


def inner_QN(spec, f, g):
    acc = GaussianRational(0)
    for n in range(spec.N + 1):
        a, b = _get(f, n), _get(g, n)
        if a and b:
            acc = acc + a * b.conj() * weight(spec, n)
    return acc


def inner_l2K(spec, f, g):
    acc = GaussianRational(0)
    for n in range(spec.K + 1):
        a, b = _get(f, n), _get(g, n)
        if a and b:
            acc = acc + a * b.conj()
    return acc


def gram_matrix(vectors, w=None, upto=None):
    """Hermitian Gram matrix of integer-pair vectors.

    ``w`` is a list of integer weights (None for all ones); only indices
    n <= upto take part (default: everything).
    """
    D = len(vectors)
    if D == 0:
        return []
    L = len(vectors[0]) if upto is None else min(upto + 1, len(vectors[0]))
    xs = [[t[0] for t in v[:L]] for v in vectors]
    ys = [[t[1] for t in v[:L]] for v in vectors]
    if w is not None:
        wl = w[:L]
        wx = [[a * b for a, b in zip(x, wl)] for x in xs]
        wy = [[a * b for a, b in zip(y, wl)] for y in ys]
    else:
        wx, wy = xs, ys
    G = [[None] * D for _ in range(D)]
    for j in range(D):
        for m in range(j, D):
            # sum w a_j conj(a_m)
            re = sum(map(int.__mul__, wx[j], xs[m])) + sum(map(int.__mul__, wy[j], ys[m]))
            im = sum(map(int.__mul__, wy[j], xs[m])) - sum(map(int.__mul__, wx[j], ys[m]))
            G[j][m] = (re, im)
            G[m][j] = (re, -im)
    return G


class GramPair:
    """Working state of the reduction: change of basis c and both Gram matrices.

    Entries are (re, im) integer pairs. Row j of c holds the coefficients of
    the current vector v_j in terms of the initial vectors, so that
    p = c P0 c^H and q = c Q0 c^H.
    """

    def __init__(self, c, p, q):
        self.c = c
        self.p = p
        self.q = q

    @classmethod
    def identity(cls, p, q):
        D = len(p)
        c = [[(1, 0) if i == j else (0, 0) for j in range(D)] for i in range(D)]
        return cls(c, [list(r) for r in p], [list(r) for r in q])

    @property
    def D(self):
        return len(self.p)

    def copy(self):
        return GramPair([list(r) for r in self.c], [list(r) for r in self.p], [list(r) for r in self.q])

    def form(self, which):
        return self.p if which == "QN" else self.q

    def as_rational(self, which):
        return [[GaussianRational(a, b) for a, b in row] for row in self.form(which)]


def gram_init(spec, vectors):
    """Initial Gram pair (c = identity) for Gaussian-integer vectors."""
    ints = []
    for v in vectors:
        row = []
        for z in v:
            if isinstance(z, tuple):
                row.append((z[0], z[1]))
            else:
                z = to_gaussian(z)
                if not z.is_integer():
                    raise ValueError("gram_init needs Gaussian-integer vectors")
                row.append((z.re.numerator, z.im.numerator))
        row += [(0, 0)] * (spec.N + 1 - len(row))
        ints.append(row)
    w = weights(spec)
    p = gram_matrix(ints, w, spec.N)
    q = gram_matrix(ints, None, spec.K)
    return GramPair.identity(p, q)
