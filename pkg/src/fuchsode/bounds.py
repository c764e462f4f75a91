"""A posteriori error bound for the selected solution vectors.

The bound on the relative l2,K distance to the true solution space has the
affine form A + B * delta_K, where

    A = (C + 1) / (Gamma - xi C),   B = 1 + R / (Gamma - xi C).

C bounds the weighted/plain norm ratio on the span of the selected vectors,
Gamma bounds it from below on the remaining directions and xi measures how
far those two spans are from l2-orthogonal. All radicals are replaced by
rational bounds rounded in the safe direction.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import decimal_render, format_rational, sqrt_bounds
from .errors import InfeasibleParams
from .forms import weight

__all__ = [
    "BoundReport",
    "xi_of_g",
    "c_factor",
    "g_threshold_ok",
    "bound_coeffs",
    "bound_value",
]

_BITS = 256


def _sqrt_hi(q, bits=_BITS):
    return sqrt_bounds(q, bits)[1]


def _sqrt_lo(q, bits=_BITS):
    return sqrt_bounds(q, bits)[0]


def _positive(x, what):
    if x <= 0:
        raise InfeasibleParams("%s is not positive" % what)
    return x


def _cross_factor(g, D, Dl2, bits=_BITS):
    """Lower bound of 1 - ((Dl2-1)/g) sqrt(D / (1 - (D-1)/g))."""
    a = _positive(1 - Fraction(D - 1, g), "1 - (D-1)/g")
    if Dl2 == 1:
        return Fraction(1)
    # exact sign: (Dl2-1)^2 D < g^2 a
    if not (Dl2 - 1) ** 2 * D < g * g * a:
        raise InfeasibleParams("g too small for D=%d, D_l2=%d" % (D, Dl2))
    while True:
        f = 1 - Fraction(Dl2 - 1, g) * _sqrt_hi(Fraction(D) / a, bits)
        if f > 0:
            return f
        bits *= 2


def xi_of_g(g, D, Dl2):
    """Upper bound on xi(g)^2 (exact when D_l2 = 1)."""
    if g <= 0:
        raise InfeasibleParams("g must be positive")
    a = _positive(1 - Fraction(D - 1, g), "1 - (D-1)/g")
    return Fraction(D * Dl2, g * g) / (a * _cross_factor(g, D, Dl2))


def c_factor(g, h, Dl2):
    """Upper bound on c(g, h, D_l2) from the multi-vector optimality result."""
    ah = _positive(1 - Fraction(Dl2 - 1, h), "1 - (D_l2-1)/h")
    num = Dl2 * _sqrt_hi(Fraction(Dl2) / ah)
    if Dl2 == 1:
        return num
    return num / _cross_factor(g, Dl2, Dl2)


def g_threshold_ok(g, Dl2):
    """g > ((Dl2-1) + sqrt((Dl2-1)^2 + 4 Dl2 (Dl2-1))) / 2, decided exactly."""
    t = Dl2 - 1
    # 2g - t > sqrt(t^2 + 4 Dl2 t)
    lhs = 2 * g - t
    return lhs > 0 and lhs * lhs > t * t + 4 * Dl2 * t


@dataclass
class BoundReport:
    xi_sq: Fraction
    C_sq_upper: Fraction
    Gamma_sq_lower: object  # Fraction, or None when there are no residual directions
    A: str
    B: str
    feasible: bool
    digits: int
    A_value: Fraction = None
    B_value: Fraction = None
    form: str = "squared"

    def to_json(self, delta_K=None):
        out = {
            "xi_sq": format_rational(self.xi_sq),
            "C_sq_upper": format_rational(self.C_sq_upper),
            "Gamma_sq_lower": "inf" if self.Gamma_sq_lower is None else format_rational(self.Gamma_sq_lower),
            "A": self.A,
            "B": self.B,
            "feasible": self.feasible,
            "digits": self.digits,
            "form": self.form,
        }
        if delta_K is not None and self.feasible:
            out["delta_K"] = decimal_render(delta_K, 1, self.digits, "ceiling") if delta_K else "0"
            out["bound"] = decimal_render(bound_value(self, delta_K), 1, self.digits, "ceiling")
        return out


def bound_value(report, delta_K):
    """Rational upper bound of A + B delta_K."""
    return report.A_value + report.B_value * Fraction(delta_K)


def _ratio_sum(pairs, invert, form):
    """Sum of p/q (or q/p) over (p, q) pairs; square-rooted terms for 'verbatim'.

    ``up`` chooses the rounding direction of the square roots.
    """
    def total(up):
        s = Fraction(0)
        for p, q in pairs:
            r = Fraction(q, p) if invert else Fraction(p, q)
            if form == "verbatim":
                r = _sqrt_hi(r) if up else _sqrt_lo(r)
            s += r
        return s
    return total


def bound_coeffs(sol, params, spec, Dl2=None, digits=50, form="squared"):
    """Certified rational bounds and the decimal coefficients A, B."""
    D = sol.D
    Dl2 = len(sol.sigma) if Dl2 is None else Dl2
    g, h = params.g, params.h
    xi_sq = xi_of_g(g, D, Dl2)
    cross = _cross_factor(g, D, Dl2)
    sig = [(gp, gq) for gp, gq in zip((row[i][0] for i, row in enumerate(sol.gram_p)),
                                      (row[i][0] for i, row in enumerate(sol.gram_q)))]
    C_sq = _ratio_sum(sig, False, form)(True) / cross
    if sol.residual:
        ah = _positive(1 - Fraction(D - Dl2 - 1, h), "1 - (D-D_l2-1)/h")
        Gamma_sq = ah / _ratio_sum(sol.residual, True, form)(True)
    elif D > Dl2:
        raise ValueError("bound needs the residual directions (compute_bound_data)")
    else:
        Gamma_sq = None
    R = weight(spec, spec.N)
    if Gamma_sq is None:
        feasible = True
        A_val, B_val = Fraction(0), Fraction(1)
    else:
        feasible = Gamma_sq > xi_sq * C_sq
        A_val = B_val = None
        if feasible:
            bits = _BITS
            while True:
                C_hi = _sqrt_hi(C_sq, bits)
                G_lo = _sqrt_lo(Gamma_sq, bits)
                xC_hi = _sqrt_hi(xi_sq * C_sq, bits)
                gap = G_lo - xC_hi
                if gap > 0:
                    break
                bits *= 2
            A_val = (C_hi + 1) / gap
            B_val = 1 + R / gap
    if feasible:
        A = decimal_render(A_val, 1, digits, "ceiling") if A_val else "0"
        B = decimal_render(B_val, 1, digits, "ceiling")
    else:
        A = B = "unavailable"
    return BoundReport(xi_sq, C_sq, Gamma_sq, A, B, feasible, digits, A_val, B_val, form)
