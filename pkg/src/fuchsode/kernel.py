"""Kernel of the band matrix b_m^n.

Step one solves the first few rows (whose support lies inside columns
0..p0) by exact Gaussian elimination. Step two extends every solution by the
band recursion on the remaining rows, where the last band entry b_m^{m+ell0}
acts as pivot. ``integerize`` then clears denominators.

Vectors are kept internally as lists of raw triples (x, y, d) meaning
(x + i y)/d with d > 0 and gcd(x, y, d) = 1.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import GaussianRational, lcm, to_gaussian
from .errors import PivotZero
from .operator import matrix_element

__all__ = [
    "KernelBasis",
    "initial_basis",
    "extend_recursion",
    "integerize",
    "band_residual",
    "thread_count",
]

THREADS_ENV = "FUCHSODE_THREADS"


def thread_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _raw(z):
    z = to_gaussian(z)
    d = lcm(z.re.denominator, z.im.denominator)
    return (z.re.numerator * (d // z.re.denominator), z.im.numerator * (d // z.im.denominator), d)


def _cooked(t):
    x, y, d = t
    return GaussianRational(Fraction(x, d), Fraction(y, d))


@dataclass
class KernelBasis:
    """D solution vectors of the truncated band system.

    ``raw[d][n]`` is the n-th entry of vector d as a triple (x, y, den).
    """

    raw: list
    p0: int
    ell0: int
    j0: int
    info: dict = field(default_factory=dict)

    @property
    def D(self):
        return len(self.raw)

    @property
    def length(self):
        return len(self.raw[0]) if self.raw else self.p0 + 1

    @property
    def vectors(self):
        return [[_cooked(t) for t in v] for v in self.raw]

    @classmethod
    def from_vectors(cls, vectors, p0, ell0, j0):
        return cls([[_raw(z) for z in v] for v in vectors], p0, ell0, j0)


def _bitsize(z):
    return (z.re.numerator.bit_length() + z.re.denominator.bit_length()
            + z.im.numerator.bit_length() + z.im.denominator.bit_length())


def _nullspace(rows, ncols):
    """Basis of the right null space of ``rows`` (lists of GaussianRational).

    Reduced row echelon form; the pivot in each column is the nonzero
    candidate with the smallest total bit size (first one on ties).
    """
    A = [list(r) for r in rows]
    pivots = []
    rank = 0
    for c in range(ncols):
        best = None
        for i in range(rank, len(A)):
            if A[i][c]:
                size = _bitsize(A[i][c])
                if best is None or size < best[0]:
                    best = (size, i)
        if best is None:
            continue
        i = best[1]
        A[rank], A[i] = A[i], A[rank]
        inv = GaussianRational(1) / A[rank][c]
        A[rank] = [a * inv for a in A[rank]]
        for i2 in range(len(A)):
            if i2 != rank and A[i2][c]:
                f = A[i2][c]
                A[i2] = [a - f * b for a, b in zip(A[i2], A[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(A):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [GaussianRational(0)] * ncols
        v[f] = GaussianRational(1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][f]
        basis.append(v)
    return basis, rank


def initial_basis(beta, p0=None):
    """Basis of the solutions on columns 0..p0 of all rows supported there.

    With the default p0 = j0 + ell0 - 1 these are rows 0..j0-1. A larger p0
    also brings in rows j0..p0-ell0 so that the recursion can start at p0+1
    without skipping any equation.
    """
    ell0, j0 = beta.ell0, beta.j0
    if p0 is None:
        p0 = beta.p0
    if p0 < beta.p0:
        raise ValueError("p0 may not be smaller than j0 + ell0 - 1")
    nrows = max(j0, p0 - ell0 + 1)
    rows = [[matrix_element(beta, m, n) for n in range(p0 + 1)] for m in range(nrows)]
    vecs, rank = _nullspace(rows, p0 + 1)
    kb = KernelBasis.from_vectors(vecs, p0, ell0, j0)
    kb.info["rank"] = rank
    kb.info["rows"] = nrows
    return kb


def _recursion_rows(beta, start, N):
    """Integer-scaled band rows used by the recursion for n = start..N.

    Each item is (lo, B) where B lists Gaussian-integer pairs proportional to
    b_{n-ell0}^r for r = lo..n (last entry is the pivot).
    """
    ell0 = beta.ell0
    out = []
    for n in range(start, N + 1):
        m = n - ell0
        lo = max(0, n - 2 * ell0)
        row = [matrix_element(beta, m, r) for r in range(lo, n + 1)]
        if not row[-1]:
            raise PivotZero(n, m)
        L = 1
        for z in row:
            L = lcm(L, lcm(z.re.denominator, z.im.denominator))
        out.append((lo, [(int(z.re * L), int(z.im * L)) for z in row]))
    return out


def _extend_one(args):
    vec, rows = args
    vec = list(vec)
    for lo, B in rows:
        n = len(vec)
        window = vec[lo:n]
        L = 1
        for t in window:
            L = lcm(L, t[2])
        sx = sy = 0
        for (bx, by), (x, y, d) in zip(B, window):
            if x == 0 and y == 0:
                continue
            f = L // d
            if f != 1:
                x *= f
                y *= f
            sx += bx * x - by * y
            sy += bx * y + by * x
        px, py = B[-1]
        nb = px * px + py * py
        # F_n = -S / (P L) = -S conj(P) / (|P|^2 L)
        x = -(sx * px + sy * py)
        y = -(sy * px - sx * py)
        d = nb * L
        g = gcd(gcd(x, y), d)
        vec.append((x // g, y // g, d // g))
    return vec


def extend_recursion(basis, beta, N, interleave_reduce_every=0, threads=None):
    """Extend every basis vector to length N+1 with the band recursion."""
    start = basis.length
    if N < start - 1:
        raise ValueError("N must be at least the current length minus one")
    rows = _recursion_rows(beta, start, N)
    if threads is None:
        threads = thread_count()
    if interleave_reduce_every and interleave_reduce_every > 0:
        raw = [list(v) for v in basis.raw]
        step = interleave_reduce_every
        for i in range(0, len(rows), step):
            raw = [_extend_one((v, rows[i:i + step])) for v in raw]
            raw = _interleaved_reduce(raw)
    elif threads > 1 and basis.D > 1:
        with ProcessPoolExecutor(max_workers=min(threads, basis.D)) as ex:
            raw = list(ex.map(_extend_one, [(v, rows) for v in basis.raw]))
    else:
        raw = [_extend_one((v, rows)) for v in basis.raw]
    out = KernelBasis(raw, basis.p0, basis.ell0, basis.j0, dict(basis.info))
    return out


def _interleaved_reduce(raw):
    """Size reduction of the partial vectors with the plain l2 form.

    Only integer row operations are used, so the span does not change.
    """
    from .forms import gram_matrix
    from .qortho import GramPair, reduce_preliminary

    ints = [integerize_raw(v) for v in raw]
    p = gram_matrix(ints, None)
    gp = GramPair.identity(p, [row[:] for row in p])
    reduce_preliminary(gp, "QN", 0)
    return [[(x, y, 1) for x, y in v] for v in apply_combination(gp.c, ints)]


def apply_combination(c, ints):
    """Rows of c (Gaussian integer pairs) times integer vectors."""
    out = []
    L = len(ints[0]) if ints else 0
    for row in c:
        acc_x = [0] * L
        acc_y = [0] * L
        for (cx, cy), v in zip(row, ints):
            if cx == 0 and cy == 0:
                continue
            for n, (x, y) in enumerate(v):
                acc_x[n] += cx * x - cy * y
                acc_y[n] += cx * y + cy * x
        out.append(list(zip(acc_x, acc_y)))
    return out


def integerize_raw(vec):
    """C * vec with C the lcm of all denominators, as (x, y) integer pairs."""
    C = 1
    for t in vec:
        C = lcm(C, t[2])
    return [(x * (C // d), y * (C // d)) for x, y, d in vec]


def integerize(v):
    """Scale a vector by the lcm of its denominators (Gaussian integer result)."""
    raw = [t if isinstance(t, tuple) else _raw(t) for t in v]
    return [GaussianRational(x, y) for x, y in integerize_raw(raw)]


def band_residual(beta, vec, N=None):
    """Largest-row check of sum_n b_m^n f_n for m in [0, N - ell0].

    Returns the list of row indices with a nonzero residual (empty when the
    vector solves every complete row).
    """
    vec = [to_gaussian(z) if not isinstance(z, tuple) else _cooked(z) for z in vec]
    if N is None:
        N = len(vec) - 1
    ell0 = beta.ell0
    bad = []
    for m in range(0, N - ell0 + 1):
        s = GaussianRational(0)
        for n in range(max(0, m - ell0), m + ell0 + 1):
            if n < len(vec) and vec[n]:
                s = s + matrix_element(beta, m, n) * vec[n]
        if s:
            bad.append(m)
    return bad
