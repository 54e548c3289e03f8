"""High-precision Markov constants and the closed-form bounds around them.

``c_n(alpha)^2`` is the reciprocal of the smallest eigenvalue of the Jacobi
matrix of the recurrence. Two independent evaluations are provided:

* ``sturm_bisection``: pivot-count bisection on the Jacobi matrix, using the
  exact squared off-diagonal entries;
* ``coefficient_rootfind``: sign bisection of ``Q_n`` on the enclosure
  ``[1/u_k, 1/ell_k]`` obtained from the leading coefficients of ``R_n``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import mpmath

from .exactcore import AlphaFunction, format_rational, parse_rational
from .newton_bounds import bounds_numeric
from .recurrence import (DomainError, MAX_SYMBOLIC_K, coeffs_symbolic,
                         diagonal_entry, offdiag_squared_entry)

#: Closest admissible distance to the alpha = -1 wall.
ALPHA_WALL = Fraction(1, 10 ** 8)
MIN_TOL = 1e-30
PRECISION_ENV = "MARKOV_PRECISION_DIGITS"
#: First positive zero of J_0, used for c(1) = 1/j_{0,1}.
J01 = "2.404825557695773"

AlphaLike = Union[int, str, Fraction, float]


def to_alpha(alpha: AlphaLike) -> Fraction:
    """Rational alpha; floats go through their shortest repr (0.1 -> 1/10)."""
    if isinstance(alpha, float):
        return parse_rational(repr(alpha))
    return parse_rational(alpha)


def check_domain(alpha: Fraction) -> None:
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    if alpha + 1 <= ALPHA_WALL:
        raise DomainError(
            f"alpha = {format_rational(alpha)} is within 1e-8 of -1; refusing "
            f"to evaluate (precision loss near the wall)")


def _mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def working_digits(tol: float) -> int:
    """Decimal digits of working precision for a relative tolerance."""
    env = os.environ.get(PRECISION_ENV)
    if env:
        try:
            digits = int(env)
        except ValueError:
            raise DomainError(f"{PRECISION_ENV} must be an integer, got {env!r}")
        if digits < 15:
            raise DomainError(f"{PRECISION_ENV} must be at least 15")
        return digits
    out = max(1, math.ceil(-math.log10(tol)))
    return 2 * out + 20


# ---------------------------------------------------------------------------
# exact c_n^2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkovEvaluation:
    """Enclosure ``lo <= c_n(alpha)^2 <= hi``."""

    n: int
    alpha: Fraction
    lo: mpmath.mpf
    hi: mpmath.mpf
    method: str
    digits: int
    cross_check: Optional["MarkovEvaluation"] = field(default=None, compare=False)

    @property
    def value(self) -> mpmath.mpf:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> mpmath.mpf:
        return self.hi - self.lo

    def overlaps(self, other: "MarkovEvaluation") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def to_json(self, digits: int = 25) -> dict:
        return {"n": self.n, "alpha": format_rational(self.alpha),
                "cn2_lo": mpmath.nstr(self.lo, digits),
                "cn2_hi": mpmath.nstr(self.hi, digits),
                "digits": digits, "method": self.method}


def _sturm_count(diag, off2, x) -> int:
    """Number of eigenvalues below ``x`` (LDL^T pivot signs)."""
    count = 0
    q = diag[0] - x
    tiny = mpmath.eps ** 2
    for i in range(len(diag)):
        if i:
            q = diag[i] - x - off2[i - 1] / q
        if q == 0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def _rough_bracket(n: int, alpha: Fraction) -> tuple[Fraction, Fraction]:
    """``1/b_1 <= lambda_min <= 1/ell_1``; both ends are exact rationals."""
    t = alpha + 1
    return 2 * t / (n * (n + 1)), 2 * t / (n + 1)


def _sturm_bisection(n: int, alpha: Fraction, tol: float, dps: int):
    with mpmath.workdps(dps):
        diag = [_mpf(diagonal_entry(m, alpha)) for m in range(n)]
        off2 = [_mpf(offdiag_squared_entry(m, alpha)) for m in range(1, n)]
        lo_f, hi_f = _rough_bracket(n, alpha)
        lo = _mpf(lo_f) * (1 - mpmath.mpf(10) ** (-dps // 2))
        hi = _mpf(hi_f) * (1 + mpmath.mpf(10) ** (-dps // 2))
        if _sturm_count(diag, off2, lo) != 0 or _sturm_count(diag, off2, hi) < 1:
            raise ArithmeticError(f"bracket failure for n={n}, alpha={alpha}")
        while hi - lo > tol * lo / 4:
            mid = (lo + hi) / 2
            if _sturm_count(diag, off2, mid) >= 1:
                hi = mid
            else:
                lo = mid
        return 1 / hi, 1 / lo


def _eval_Q_mp(n: int, diag, off2, x):
    prev, cur = mpmath.mpf(0), mpmath.mpf(1)
    for m in range(n):
        nxt = (x - diag[m]) * cur
        if m:
            nxt -= off2[m - 1] * prev
        prev, cur = cur, nxt
    return cur


def _coefficient_rootfind(n: int, alpha: Fraction, tol: float, dps: int):
    k = min(MAX_SYMBOLIC_K, n)
    bp = bounds_numeric(k, n, alpha, digits=dps)
    with mpmath.workdps(dps):
        diag = [_mpf(diagonal_entry(m, alpha)) for m in range(n)]
        off2 = [_mpf(offdiag_squared_entry(m, alpha)) for m in range(1, n)]
        lo = 1 / _mpf(bp.upper)
        hi = 1 / _mpf(bp.lower)
        s0 = mpmath.sign(_eval_Q_mp(n, diag, off2, lo))
        if s0 == 0:
            return 1 / lo, 1 / lo
        if mpmath.sign(_eval_Q_mp(n, diag, off2, hi)) == s0:
            # more than one zero in the enclosure: scan for the first change
            steps = 256
            for i in range(1, steps + 1):
                x = lo + (hi - lo) * i / steps
                if mpmath.sign(_eval_Q_mp(n, diag, off2, x)) != s0:
                    hi = x
                    break
            else:
                raise ArithmeticError(
                    f"no sign change of Q_{n} in [1/u_{k}, 1/ell_{k}]")
        while hi - lo > tol * lo / 4:
            mid = (lo + hi) / 2
            s = mpmath.sign(_eval_Q_mp(n, diag, off2, mid))
            if s == 0:
                return 1 / mid, 1 / mid
            if s == s0:
                lo = mid
            else:
                hi = mid
        return 1 / hi, 1 / lo


def exact_cn2(n: int, alpha: AlphaLike, tol: float = 1e-20,
              cross_check: bool = True) -> MarkovEvaluation:
    """``c_n(alpha)^2`` enclosed to relative width ``tol``.

    With ``cross_check`` the coefficient method runs as well and the two
    enclosures must overlap.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if not MIN_TOL <= tol < 1:
        raise DomainError(f"tol must lie in [1e-30, 1), got {tol}")
    alpha = to_alpha(alpha)
    check_domain(alpha)
    dps = working_digits(tol)
    with mpmath.workdps(dps):
        if n == 1:
            v = _mpf(1 / (alpha + 1))
            return MarkovEvaluation(1, alpha, v, v, "exact", dps)
        lo, hi = _sturm_bisection(n, alpha, tol, dps)
        result = MarkovEvaluation(n, alpha, lo, hi, "sturm_bisection", dps)
        if not cross_check:
            return result
        lo2, hi2 = _coefficient_rootfind(n, alpha, tol, dps)
        other = MarkovEvaluation(n, alpha, lo2, hi2, "coefficient_rootfind", dps)
        slack = tol * lo
        if not (lo - slack <= hi2 and lo2 - slack <= hi):
            raise ArithmeticError(
                f"methods disagree at n={n}, alpha={alpha}: "
                f"[{lo}, {hi}] vs [{lo2}, {hi2}]")
        return MarkovEvaluation(n, alpha, lo, hi, "sturm_bisection", dps, other)


def turan_constant(n: int, dps: int = 50) -> mpmath.mpf:
    """``c_n(0) = 1 / (2 sin(pi/(4n+2)))``."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    with mpmath.workdps(dps):
        return 1 / (2 * mpmath.sin(mpmath.pi / (4 * n + 2)))


# ---------------------------------------------------------------------------
# closed-form bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundFormula:
    name: str
    description: str
    sides: tuple[str, ...]
    domain: str


FORMULAS: dict[str, BoundFormula] = {f.name: f for f in [
    BoundFormula("dorfler", "classical two-sided bound, quadratic in n",
                 ("lower", "upper"), "n >= 1"),
    BoundFormula("four_coeff", "bound from the four leading coefficients",
                 ("lower", "upper"), "n >= 3; lower also needs n > (alpha+1)/6"),
    BoundFormula("large_alpha", "upper bound of the right order in alpha",
                 ("upper",), "n >= 3, alpha >= 2"),
    BoundFormula("order_alpha", "two-sided bound n(n+alpha+3)/((alpha+1)(alpha+8))",
                 ("lower", "upper"), "n >= 3, alpha >= 2"),
] + [BoundFormula(f"k{k}", f"bound from the {k} leading coefficients of R_n",
                  ("lower", "upper"), f"n >= {k}") for k in range(3, 7)]}


@dataclass(frozen=True)
class ClosedFormResult:
    """``lower``/``upper`` are ``Fraction`` when exact, else ``mpf``; ``None``
    with a ``reason`` when the side is not applicable."""

    formula: str
    n: int
    alpha: Fraction
    lower: object = None
    upper: object = None
    lower_reason: str = ""
    upper_reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.lower is not None or self.upper is not None


def _poly6(a):
    return 21 * a ** 3 + 299 * a ** 2 + 1391 * a + 2073


def _k_lower_c(k: int, a):
    """``c`` of the k-coefficient lower bound, valid for Fraction or mpf."""
    if k == 3:
        return 2 / ((a + 1) * (a + 5))
    if k == 4:
        return (5 * a + 17) / (2 * (a + 1) * (a + 3) * (a + 7))
    if k == 5:
        return 2 * (7 * a + 31) / ((a + 1) * (a + 9) * (5 * a + 17))
    return _poly6(a) / ((a + 1) * (a + 3) * (a + 5) * (a + 11) * (7 * a + 31))


def _k_upper_c(k: int, a):
    """``c`` of the k-coefficient upper bound (the (2k)-th power form)."""
    if k == 3:
        return 1 / ((a + 1) ** 3 * (a + 3) * (a + 5))
    if k == 4:
        return (5 * a + 17) / (2 * (a + 1) ** 4 * (a + 3) ** 2 * (a + 5) * (a + 7))
    if k == 5:
        return (7 * a + 31) / ((a + 1) ** 5 * (a + 3) ** 2 * (a + 5) * (a + 7) * (a + 9))
    return _poly6(a) / ((a + 1) ** 6 * (a + 3) ** 3 * (a + 5) ** 2 * (a + 7)
                        * (a + 9) * (a + 11))


K_LOWER_SIGMA = {3: Fraction(3, 8), 4: Fraction(8, 25), 5: Fraction(25, 84),
                 6: Fraction(2, 7)}
K_UPPER_SIGMA = {3: Fraction(2, 5), 4: Fraction(3, 7), 5: Fraction(4, 9),
                 6: Fraction(5, 11)}


def closed_form_bounds(n: int, alpha: AlphaLike, which: str,
                       dps: int = 40) -> ClosedFormResult:
    """Evaluate one named bound formula for ``c_n(alpha)^2``.

    Outside a formula's domain the side comes back as ``None`` together with
    the reason; no number is produced there.
    """
    if which not in FORMULAS:
        raise DomainError(f"unknown formula {which!r}; choose from {sorted(FORMULAS)}")
    alpha = to_alpha(alpha)
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    a, t = alpha, alpha + 1
    lo = hi = None
    lo_why = hi_why = ""
    with mpmath.workdps(dps):
        am = _mpf(a)
        if which == "dorfler":
            lo = (Fraction(n * n) / ((a + 1) * (a + 3))
                  + (2 * a * a + 5 * a + 6) * n / (3 * (a + 1) * (a + 2) * (a + 3))
                  + (a + 6) / (3 * (a + 2) * (a + 3)))
            hi = Fraction(n * (n + 1)) / (2 * t)
        elif which == "four_coeff":
            if n < 3:
                lo_why = hi_why = "requires n >= 3"
            else:
                if n > t / 6:
                    lo = 2 * (n + 2 * a / 3) * (n - t / 6) / (t * (a + 5))
                else:
                    lo_why = "requires n > (alpha+1)/6"
                hi = ((n + 1) * (n + _mpf(2 * t / 5))
                      / (_mpf(t) * mpmath.cbrt((am + 3) * (am + 5))))
        elif which in ("large_alpha", "order_alpha"):
            why = "" if (n >= 3 and a >= 2) else "requires n >= 3 and alpha >= 2"
            if why:
                lo_why = hi_why = why
            elif which == "large_alpha":
                hi = 4 * n * (n + 2 + 3 * t / 4) / (a * a + 10 * a + 8)
                lo_why = "upper bound only"
            else:
                base = Fraction(n) * (n + a + 3) / (t * (a + 8))
                lo, hi = 2 * base / 3, 4 * base
        else:
            k = int(which[1:])
            if n < k:
                lo_why = hi_why = f"requires n >= {k}"
            else:
                lo = _k_lower_c(k, a) * n * (n + K_LOWER_SIGMA[k] * t)
                hi = (mpmath.root(_mpf(_k_upper_c(k, a)), k)
                      * (n + 1) * _mpf(n + K_UPPER_SIGMA[k] * t))
    return ClosedFormResult(which, n, alpha, lo, hi, lo_why, hi_why)


def bound_k(n: int, alpha: AlphaLike, k: int, side: str, dps: int = 40):
    """``underline c^2_{n,k}`` (exact) or ``overline c^2_{n,k}`` (mpf)."""
    r = closed_form_bounds(n, alpha, f"k{k}", dps)
    return r.lower if side == "lower" else r.upper


# ---------------------------------------------------------------------------
# asymptotic constant
# ---------------------------------------------------------------------------


def _mp(a) -> mpmath.mpf:
    return _mpf(a) if isinstance(a, Fraction) else mpmath.mpf(a)


def ell_k(alpha, k: int):
    """Lower bound for ``c(alpha)`` from k coefficients: sqrt(c_lower)."""
    return mpmath.sqrt(_k_lower_c(k, _mp(alpha)))


def u_k(alpha, k: int):
    """Upper bound for ``c(alpha)``: (c_upper)^(1/(2k))."""
    return mpmath.root(_k_upper_c(k, _mp(alpha)), 2 * k)


def rho_k(alpha, k: int):
    return u_k(alpha, k) / ell_k(alpha, k)


def _large_alpha_sq(a):
    return 4 / (a * a + 10 * a + 8)


@dataclass(frozen=True)
class AsymptoticBounds:
    alpha: Fraction
    lower_sq: mpmath.mpf
    upper_sq: mpmath.mpf
    upper_branch: str
    ell: dict
    u: dict
    rho: dict

    @property
    def ratio(self) -> mpmath.mpf:
        """``overline c / underline c``."""
        return mpmath.sqrt(self.upper_sq / self.lower_sq)


def asymptotic_bounds(alpha: AlphaLike, dps: int = 30) -> AsymptoticBounds:
    """Bounds for ``c(alpha)^2`` and the per-k ratios ``rho_k``.

    The upper bound switches to ``4/(alpha^2+10 alpha+8)`` beyond the
    crossover ``alpha_star`` (about 172).
    """
    alpha = to_alpha(alpha)
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    with mpmath.workdps(dps):
        a = _mpf(alpha)
        star = crossover("corollary13")
        lower = _k_lower_c(6, a)
        if a <= star:
            upper, branch = mpmath.root(_k_upper_c(6, a), 6), "six_coeff"
        else:
            upper, branch = _large_alpha_sq(a), "large_alpha"
        ell = {k: ell_k(a, k) for k in range(3, 7)}
        u = {k: u_k(a, k) for k in range(3, 7)}
        rho = {k: u[k] / ell[k] for k in range(3, 7)}
        return AsymptoticBounds(alpha, lower, upper, branch, ell, u, rho)


# ---------------------------------------------------------------------------
# crossovers
# ---------------------------------------------------------------------------

def _g_corollary_e(a):
    return 1 / ((a + 1) * mpmath.cbrt((a + 3) * (a + 5))) - _large_alpha_sq(a)


def _g_corollary13(a):
    return mpmath.root(_k_upper_c(6, a), 6) - _large_alpha_sq(a)


def _g_rho6(a):
    return rho_k(a, 6) - 2


CROSSOVERS: dict[str, tuple[Callable, float, float]] = {
    "corollaryE": (_g_corollary_e, 1.0, 1e3),
    "corollary13": (_g_corollary13, 1.0, 1e4),
    "rho6_equals_2": (_g_rho6, 1e3, 1e7),
}


class BracketError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def crossover(which: str, sig_digits: int = 6) -> mpmath.mpf:
    """Root of a branch-equality equation, by bisection on a log grid bracket."""
    if which not in CROSSOVERS:
        raise DomainError(f"unknown crossover {which!r}; choose from {sorted(CROSSOVERS)}")
    g, a0, a1 = CROSSOVERS[which]
    with mpmath.workdps(30):
        grid = [mpmath.mpf(a0) * (mpmath.mpf(a1) / a0) ** (mpmath.mpf(i) / 400)
                for i in range(401)]
        vals = [g(x) for x in grid]
        for (x0, v0), (x1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
            if v0 == 0:
                return x0
            if mpmath.sign(v0) != mpmath.sign(v1):
                lo, hi, slo = x0, x1, mpmath.sign(v0)
                break
        else:
            raise BracketError(
                f"{which}: no sign change on [{a0}, {a1}]; the formula may be "
                f"mistranscribed")
        tol = mpmath.mpf(10) ** (-(sig_digits + 2))
        while hi - lo > tol * lo:
            mid = (lo + hi) / 2
            if mpmath.sign(g(mid)) == slo:
                lo = mid
            else:
                hi = mid
        return +(lo + hi) / 2


def rho6_samples(alphas) -> list[tuple[Fraction, mpmath.mpf]]:
    return [(to_alpha(a), rho_k(to_alpha(a), 6)) for a in alphas]


# ---------------------------------------------------------------------------
# conjecture evidence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class C42Report:
    k: int
    leading: AlphaFunction
    predicted: AlphaFunction

    @property
    def match(self) -> bool:
        return self.leading == self.predicted


def predicted_leading(k: int) -> AlphaFunction:
    """``1 / (2^k k! (alpha+1)(alpha+3)...(alpha+2k-1))``."""
    a = AlphaFunction.variable()
    den = AlphaFunction.constant(2 ** k * math.factorial(k))
    for j in range(1, 2 * k, 2):
        den = den * (a + j)
    return 1 / den


def conjecture_c42(k: int) -> C42Report:
    """Exact comparison of the n^(2k) coefficient of b_k with the prediction."""
    if not 1 <= k <= MAX_SYMBOLIC_K:
        raise DomainError(f"k must lie in 1..{MAX_SYMBOLIC_K}, got {k}")
    b = coeffs_symbolic(k)[k]
    return C42Report(k, b.lc, predicted_leading(k))


@dataclass(frozen=True)
class C41Row:
    alpha: Fraction
    alpha_cn2: mpmath.mpf
    ratio_to_n: mpmath.mpf
    in_bracket: bool


def conjecture_c41(n: int, alphas=(100, 1000, 10000, 100000),
                   tol: float = 1e-15) -> list[C41Row]:
    """``alpha * c_n(alpha)^2`` for growing alpha (numerical evidence only).

    ``in_bracket`` checks ``6n/7 <= alpha c_n^2 <= 3n``.
    """
    rows = []
    for a in alphas:
        a = to_alpha(a)
        ev = exact_cn2(n, a, tol, cross_check=False)
        v = ev.value * _mpf(a)
        rows.append(C41Row(a, v, v / n, 6 * mpmath.mpf(n) / 7 <= v <= 3 * n))
    return rows
