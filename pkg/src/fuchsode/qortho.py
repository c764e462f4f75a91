"""Integer quasi-orthogonalization and the multi-vector selection pipeline.

Vectors are never touched directly: every row operation v_j <- v_j - r v_l
or v_j <- 2 v_j is applied to the coefficient matrix c and to both Gram
matrices p (weighted form) and q (plain l2 form on 0..K). All entries are
Gaussian integers held as (re, im) int pairs.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .arith import GaussianRational, gauss_round
from .errors import AllDegenerate, DependentReplenish, IterationCapExceeded
from .forms import GramPair, gram_matrix, weights
from .kernel import apply_combination, integerize_raw

__all__ = [
    "OrthoParams",
    "SolutionSet",
    "reduce_preliminary",
    "reduce_strong",
    "select_min_ratio",
    "run_pipeline",
    "truncate_K",
    "suggest_dimension",
    "hermitian_psd",
    "certificate_min_ratio",
    "pairwise_l2_certificate",
]


# Gaussian integer helpers on (re, im) pairs --------------------------------

def _mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _round_div(a, b):
    """Round a/b to the nearest integer, halves toward zero (b > 0)."""
    if a >= 0:
        return -((b - 2 * a) // (2 * b))
    return (b + 2 * a) // (2 * b)


def _gauss_quotient(z, d):
    return (_round_div(z[0], d), _round_div(z[1], d))


def _abs2(z):
    return z[0] * z[0] + z[1] * z[1]


@dataclass
class OrthoParams:
    h: int = 64
    g: int = 64
    max_iterations: int = 10 ** 6
    target_dim: int = 1
    compute_bound_data: bool = False
    strict_table_test: int = 0


@dataclass
class SolutionSet:
    G: list
    G_trunc: list
    sigma: list
    K: int
    D: int
    c: list
    residual: list = field(default_factory=list)
    candidates: list = field(default_factory=list)
    iteration_log: dict = field(default_factory=dict)
    gram_p: list = field(default_factory=list)
    gram_q: list = field(default_factory=list)


class _Log:
    def __init__(self, D):
        self.counts = {}
        self.doublings = [0] * D

    def add(self, phase, key, k=1):
        d = self.counts.setdefault(phase, {"passes": 0, "reductions": 0, "doublings": 0})
        d[key] = d.get(key, 0) + k

    def as_dict(self):
        return {"phases": self.counts, "doublings_per_row": list(self.doublings)}


def _swap(gp, i, j):
    if i == j:
        return
    for M in (gp.c, gp.p, gp.q):
        M[i], M[j] = M[j], M[i]
    for M in (gp.p, gp.q):
        for row in M:
            row[i], row[j] = row[j], row[i]


def _permute_active(gp, order, start):
    """Reorder rows/cols start.. so that new position start+t holds old order[t]."""
    D = gp.D
    perm = list(range(start)) + list(order)
    gp.c = [gp.c[k] for k in perm]
    gp.p = [[gp.p[a][b] for b in perm] for a in perm]
    gp.q = [[gp.q[a][b] for b in perm] for a in perm]
    assert len(perm) == D


def _row_op(gp, j, l, r):
    """v_j <- v_j - r v_l."""
    D = gp.D
    rc = (r[0], -r[1])
    cj, cl = gp.c[j], gp.c[l]
    for m in range(D):
        a = _mul(r, cl[m])
        cj[m] = (cj[m][0] - a[0], cj[m][1] - a[1])
    for M in (gp.p, gp.q):
        Mj, Ml = M[j], M[l]
        for m in range(D):
            a = _mul(r, Ml[m])
            Mj[m] = (Mj[m][0] - a[0], Mj[m][1] - a[1])
        for m in range(D):
            a = _mul(rc, M[m][l])
            M[m][j] = (M[m][j][0] - a[0], M[m][j][1] - a[1])


def _double(gp, j):
    D = gp.D
    gp.c[j] = [(2 * a, 2 * b) for a, b in gp.c[j]]
    for M in (gp.p, gp.q):
        M[j] = [(2 * a, 2 * b) for a, b in M[j]]
        for m in range(D):
            a, b = M[m][j]
            M[m][j] = (2 * a, 2 * b)


def _reduce_pair(gp, F, j, l, log, phase):
    """One rounding step of row j against row l under Gram matrix F."""
    dl = F[l][l][0]
    if dl <= 0:
        return False
    r = _gauss_quotient(F[j][l], dl)
    if r == (0, 0):
        return False
    before = F[j][j][0]
    _row_op(gp, j, l, r)
    F = gp.form("QN") if F is gp.p else gp.form("l2K")
    if not F[j][j][0] < before:
        raise AssertionError("reduction step did not shrink the vector")
    log.add(phase, "reductions")
    return True


def _check_frozen(gp, snapshot, upto):
    if [list(r) for r in gp.c[:upto]] != snapshot:
        raise AssertionError("a frozen vector was modified")


STALL_PASSES = 8
STALL_SHIFT = 32


def _nearest_plane(gp, form, j, partners, log, phase):
    """Reduce row j against the span of ``partners`` by nearest-plane rounding.

    Gram-Schmidt data of the partners is computed exactly from the Gram
    matrix; the integer coefficients are fixed from the last partner down,
    each one rounding the remaining projection onto that partner's
    orthogonalized direction. The step is kept only if row j gets strictly
    shorter. Returns True if it was kept.
    """
    F = gp.form(form)
    G = lambda a, b: GaussianRational(*F[a][b])
    k = len(partners)
    s = {}      # s[(x, c)] = <v_x, b*_c>
    B = []
    mu = {}
    for c in range(k):
        for x in partners[c:] + [j]:
            v = G(x, partners[c])
            for d in range(c):
                v = v - mu[(c, d)].conj() * s[(x, d)]
            s[(x, c)] = v
        B.append(s[(partners[c], c)].re)
        if B[c] <= 0:
            return False
        for a in range(c + 1, k):
            mu[(a, c)] = s[(partners[a], c)] / B[c]
    y = [s[(j, c)] / B[c] for c in range(k)]
    coeffs = [None] * k
    for c in range(k - 1, -1, -1):
        r = gauss_round(y[c])
        coeffs[c] = r
        if r:
            y[c] = y[c] - r
            for d in range(c):
                y[d] = y[d] - r * mu[(c, d)]
    if not any(coeffs):
        return False
    before = F[j][j][0]
    saved = gp.copy()
    for c in range(k):
        r = coeffs[c]
        if r:
            _row_op(gp, j, partners[c], (int(r.re), int(r.im)))
    if not gp.form(form)[j][j][0] < before:
        gp.c, gp.p, gp.q = saved.c, saved.p, saved.q
        return False
    log.add(phase, "projections")
    return True


def reduce_preliminary(gram, form, active_from, partners_from=None, max_iterations=10 ** 6,
                       log=None, phase=None):
    """Size-reduce active rows until a full pass leaves everything unchanged.

    Each pass sorts the active rows by their diagonal entry in ``form`` and
    subtracts from every active row j the rounded projection onto each
    earlier row l (l >= partners_from). Frozen rows (< active_from) are only
    used as partners.

    Pairwise rounding can stall when the partners are nearly dependent: each
    pass then shortens the rows by a vanishing fraction. After STALL_PASSES
    consecutive passes shrinking the active diagonal sum by less than
    2^-STALL_SHIFT, every active row gets one nearest-plane step against the
    same partner set before the pairwise passes resume.
    """
    if partners_from is None:
        partners_from = active_from
    log = log or _Log(gram.D)
    phase = phase or ("pre_" + form)
    snap = [list(r) for r in gram.c[:active_from]]
    D = gram.D
    slow = 0
    for _ in range(max_iterations):
        log.add(phase, "passes")
        F = gram.form(form)
        order = sorted(range(active_from, D), key=lambda i: F[i][i][0])
        _permute_active(gram, order, active_from)
        total = sum(gram.form(form)[i][i][0] for i in range(active_from, D))
        changed = False
        for j in range(active_from, D):
            for l in range(partners_from, j):
                if _reduce_pair(gram, gram.form(form), j, l, log, phase):
                    changed = True
        if not changed:
            _check_frozen(gram, snap, active_from)
            return gram
        after = sum(gram.form(form)[i][i][0] for i in range(active_from, D))
        slow = slow + 1 if (total - after) << STALL_SHIFT < total else 0
        if slow >= STALL_PASSES:
            slow = 0
            for j in range(active_from, D):
                partners = list(range(partners_from, j))
                if partners:
                    _nearest_plane(gram, form, j, partners, log, phase)
    raise IterationCapExceeded("%s did not settle in %d passes" % (phase, max_iterations))


def _too_parallel(F, j, l, bound, scale):
    """bound^2 |F_jl|^2 >= F_jj F_ll (or its coarse scaled variant)."""
    if scale:
        s = _gauss_quotient(F[j][l], scale)
        return bound * bound * _abs2(s) >= (F[j][j][0] // scale + 1) * (F[l][l][0] // scale + 1)
    return bound * bound * _abs2(F[j][l]) >= F[j][j][0] * F[l][l][0]


def reduce_strong(gram, form, bound, active_from, partners_from=None, max_iterations=10 ** 6,
                  log=None, phase=None, scale=0):
    """Double-and-reduce until every active pair has cosine below 1/bound.

    On exit bound^2 |<v_j,v_l>|^2 < |v_j|^2 |v_l|^2 for every active row j
    and every partner l < j (always with the exact test; ``scale`` only
    selects the coarse test used inside the loop).
    """
    if partners_from is None:
        partners_from = active_from
    log = log or _Log(gram.D)
    phase = phase or ("strong_" + form)
    snap = [list(r) for r in gram.c[:active_from]]
    D = gram.D
    for _ in range(max_iterations):
        log.add(phase, "passes")
        changed = False
        for j in range(active_from, D):
            for l in range(partners_from, j):
                F = gram.form(form)
                if F[l][l][0] <= 0:
                    continue
                if _too_parallel(F, j, l, bound, scale):
                    _double(gram, j)
                    log.add(phase, "doublings")
                    log.doublings[j] += 1
                    changed = True
                if _reduce_pair(gram, gram.form(form), j, l, log, phase):
                    changed = True
        if not changed:
            F = gram.form(form)
            if scale and any(_too_parallel(F, j, l, bound, 0)
                             for j in range(active_from, D) for l in range(partners_from, j)
                             if F[l][l][0] > 0):
                scale = 0
                continue
            _check_frozen(gram, snap, active_from)
            return gram
    raise IterationCapExceeded("%s did not settle in %d passes" % (phase, max_iterations))


def select_min_ratio(gram, spec=None, active_from=0):
    """Active row with the smallest p_dd / q_dd (lowest index on ties)."""
    best = None
    for d in range(active_from, gram.D):
        pd, qd = gram.p[d][d][0], gram.q[d][d][0]
        if qd <= 0:
            continue
        if best is None or pd * best[2] < best[1] * qd:
            best = (d, pd, qd)
    if best is None:
        raise AllDegenerate("every active vector vanishes on 0..K")
    return best[0]


def _rank(rows):
    """Exact rank of a matrix of (re, im) pairs."""
    A = [[GaussianRational(a, b) for a, b in r] for r in rows]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = GaussianRational(1) / A[rank][c]
        for i in range(rank + 1, len(A)):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def _congruence(c, P):
    """c P c^H with Gaussian integer pairs."""
    D = len(c)
    cP = [[(sum(_mul(c[i][k], P[k][j])[0] for k in range(D)),
            sum(_mul(c[i][k], P[k][j])[1] for k in range(D))) for j in range(D)] for i in range(D)]
    out = [[None] * D for _ in range(D)]
    for i in range(D):
        for j in range(D):
            re = im = 0
            for k in range(D):
                a = _mul(cP[i][k], (c[j][k][0], -c[j][k][1]))
                re += a[0]
                im += a[1]
            out[i][j] = (re, im)
    return out


def _replenish(gp, frozen, P0, Q0):
    """Fill rows frozen.. with unit rows e_s so that c stays nonsingular."""
    D = gp.D
    need = D - frozen
    top = gp.c[:frozen]
    for S in combinations(range(D), need):
        rest = [k for k in range(D) if k not in S]
        sub = [[row[k] for k in rest] for row in top]
        if _rank(sub) == frozen:
            gp.c = top + [[(1, 0) if k == s else (0, 0) for k in range(D)] for s in S]
            gp.p = _congruence(gp.c, P0)
            gp.q = _congruence(gp.c, Q0)
            return S
    raise DependentReplenish("no admissible set of replacement vectors")


def truncate_K(v, K):
    """Entries 0..K of v (zero padded)."""
    v = list(v)
    out = v[:K + 1]
    zero = out[0].__class__(0) if out and not isinstance(out[0], tuple) else (0, 0)
    out += [zero] * (K + 1 - len(out))
    return out


def run_pipeline(basis, spec, params):
    """Select D_l2 quasi-optimal solution vectors from an extended kernel basis."""
    ints = [integerize_raw(v) for v in basis.raw]
    D = len(ints)
    if D == 0:
        raise AllDegenerate("the kernel is empty")
    ints = [v + [(0, 0)] * (spec.N + 1 - len(v)) for v in ints]
    w = weights(spec)
    P0 = gram_matrix(ints, w, spec.N)
    Q0 = gram_matrix(ints, None, spec.K)
    gp = GramPair.identity(P0, Q0)
    log = _Log(D)
    target = min(params.target_dim, D)
    rounds = target + 1 if params.compute_bound_data and target < D else target
    cap = params.max_iterations
    candidates = []
    residual = []
    for dt in range(rounds):
        if dt > 0:
            reduce_preliminary(gp, "l2K", dt, 0, cap, log, "S1")
            reduce_strong(gp, "l2K", params.g, dt, 0, cap, log, "S2")
        reduce_preliminary(gp, "QN", dt, dt, cap, log, "Q1")
        reduce_strong(gp, "QN", params.h, dt, dt, cap, log, "Q2", params.strict_table_test)
        ratios = [(gp.p[d][d][0], gp.q[d][d][0]) for d in range(dt, D)]
        if dt == 0:
            candidates = ratios
        if dt == target:
            residual = ratios
            break
        best = select_min_ratio(gp, spec, dt)
        _swap(gp, best, dt)
        if dt + 1 < rounds:
            _replenish(gp, dt + 1, P0, Q0)
    frozen_c = [list(r) for r in gp.c[:target]]
    G = apply_combination(frozen_c, ints)
    sigma = [Fraction(gp.p[d][d][0], gp.q[d][d][0]) for d in range(target)]
    check_p = _congruence(gp.c, P0)
    if check_p != gp.p:
        raise AssertionError("Gram matrix bookkeeping diverged")
    return SolutionSet(
        G=G,
        G_trunc=[truncate_K(v, spec.K) for v in G],
        sigma=sigma,
        K=spec.K,
        D=D,
        c=frozen_c,
        residual=residual,
        candidates=candidates,
        iteration_log=log.as_dict(),
        gram_p=[row[:target] for row in gp.p[:target]],
        gram_q=[row[:target] for row in gp.q[:target]],
    )


def suggest_dimension(sigmas, factor=10 ** 6):
    """First position where consecutive ratios jump by more than ``factor``.

    Returns the suggested number of square-summable directions, or None.
    """
    for i in range(len(sigmas) - 1):
        a, b = Fraction(sigmas[i]), Fraction(sigmas[i + 1])
        if a == 0 or b > a * factor:
            return i + 1
    return None


def hermitian_psd(H):
    """Exact positive semidefiniteness test for a Hermitian matrix."""
    A = [[x if isinstance(x, GaussianRational) else GaussianRational(*x) for x in row] for row in H]
    n = len(A)
    for k in range(n):
        dk = A[k][k].re
        if A[k][k].im != 0:
            raise ValueError("matrix is not Hermitian")
        if dk < 0:
            return False
        if dk == 0:
            if any(A[k][j] for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            if not A[i][k]:
                continue
            f = A[i][k] / dk
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - f * A[k][j]
    return True


def certificate_min_ratio(sol, basis, spec, h):
    """Check sigma(G1) <= c * min sigma with c = D/(1 - (D-1)/h).

    Two checks are returned: against the final reduced candidate vectors, and
    the stronger one against every nonzero vector of the span (the pencil
    P - (sigma/c) Q is positive semidefinite).
    """
    D = sol.D
    if h <= D - 1:
        raise ValueError("need h > D - 1")
    c = Fraction(D) / (1 - Fraction(D - 1, h))
    s1 = sol.sigma[0]
    cand = min(Fraction(p, q) for p, q in sol.candidates if q > 0)
    ints = [integerize_raw(v) + [(0, 0)] * (spec.N + 1 - len(v)) for v in basis.raw]
    P0 = gram_matrix(ints, weights(spec), spec.N)
    Q0 = gram_matrix(ints, None, spec.K)
    t = s1 / c
    pencil = [[GaussianRational(*P0[i][j]) - GaussianRational(*Q0[i][j]) * t for j in range(D)]
              for i in range(D)]
    return {"candidates": s1 <= c * cand, "span": hermitian_psd(pencil), "c": c}


def pairwise_l2_certificate(sol, g):
    """Pairwise bound between the selected vectors in the l2,K form.

    For the later vector of each pair, with dt its zero-based position:
    g^2 |<Gj,Gl>|^2 (1 - (D-dt-1)/g) <= (D-dt) |Gj|^2 |Gl|^2.
    """
    D = len(sol.gram_q) and sol.D
    q = sol.gram_q
    for l in range(len(q)):
        for j in range(l):
            dt = l
            lhs = Fraction(g * g * _abs2(q[j][l])) * (1 - Fraction(D - dt - 1, g))
            rhs = (D - dt) * q[j][j][0] * q[l][l][0]
            if lhs > rhs:
                return False
    return True
