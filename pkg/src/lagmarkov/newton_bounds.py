"""Power sums from elementary symmetric coefficients and zero bounds.

For a polynomial ``x^n - b_1 x^{n-1} + b_2 x^{n-2} - ...`` with positive
zeros, ``p_r`` is the r-th power sum of the zeros and

    ell_k = p_k / p_{k-1}  <=  x_max  <  u_k = p_k ** (1/k),

with ``p_0 = n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .exactcore import NPolynomial
from .recurrence import DomainError, coeffs_numeric, coeffs_symbolic


@dataclass(frozen=True)
class PowerSumFormula:
    """``p_r`` as an integer polynomial in the formal symbols ``b_1..b_r``.

    ``terms`` maps exponent tuples ``(e_1, ..., e_r)`` to coefficients.
    """

    r: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def weighted_degrees(self) -> set[int]:
        return {sum((i + 1) * e for i, e in enumerate(exps))
                for exps, _ in self.terms}

    def evaluate(self, b: Sequence):
        """Substitute ``b[0] = b_1, ...`` (any ring with + and *)."""
        if len(b) < self.r:
            raise ValueError(f"need {self.r} coefficients, got {len(b)}")
        powers: dict[tuple[int, int], object] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = b[i] if e == 1 else power(i, e - 1) * b[i]
            return powers[key]

        total = None
        for exps, coef in self.terms:
            term = None
            for i, e in enumerate(exps):
                if e:
                    f = power(i, e)
                    term = f if term is None else term * f
            term = term * coef
            total = term if total is None else total + term
        return total

    def __str__(self):
        parts = []
        for exps, coef in self.terms:
            mono = "*".join(f"b{i + 1}" + (f"^{e}" if e > 1 else "")
                            for i, e in enumerate(exps) if e)
            parts.append(f"{coef:+d}*{mono}")
        return f"p{self.r} = " + " ".join(parts)


# formal polynomials in b_1..b_r: dict exponent-tuple -> int

def _fp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _fp_add(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def _sym(i: int, r: int, coef: int = 1) -> dict:
    e = [0] * r
    e[i - 1] = 1
    return {tuple(e): coef}


def _det(matrix: list[list[dict]]) -> dict:
    """Determinant by cofactor expansion along the first row."""
    size = len(matrix)
    if size == 1:
        return matrix[0][0]
    total: dict = {}
    for j, entry in enumerate(matrix[0]):
        if not entry:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        total = _fp_add(total, _fp_mul(entry, _det(minor)), -1 if j % 2 else 1)
    return total


def _sorted_terms(d: dict) -> tuple:
    return tuple(sorted(d.items(), key=lambda kv: (tuple(-x for x in kv[0]))))


@lru_cache(maxsize=None)
def power_sum_formula(r: int) -> PowerSumFormula:
    """Expand the banded r x r determinant for ``p_r``.

    First column ``(b_1, 2 b_2, ..., r b_r)``, ones on the superdiagonal and
    ``b_{i-j+1}`` below the diagonal elsewhere.
    """
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    one = {tuple([0] * r): 1}
    matrix = []
    for i in range(1, r + 1):
        row = []
        for j in range(1, r + 1):
            if j == 1:
                row.append(_sym(i, r, i))
            elif j == i + 1:
                row.append(dict(one))
            elif j <= i:
                row.append(_sym(i - j + 1, r))
            else:
                row.append({})
        matrix.append(row)
    return PowerSumFormula(r, _sorted_terms(_det(matrix)))


@lru_cache(maxsize=None)
def power_sum_recursive(r: int) -> PowerSumFormula:
    """``p_r`` from the Newton identities, solved successively for p_1, p_2, ..."""
    polys: list[dict] = []
    for m in range(1, r + 1):
        acc = _sym(m, r, (-1) ** (m + 1) * m)
        for i in range(1, m):
            acc = _fp_add(acc, _fp_mul(polys[m - i - 1], _sym(i, r)),
                          (-1) ** (i + 1))
        polys.append(acc)
    return PowerSumFormula(r, _sorted_terms(polys[-1]))


def power_sums(b: Sequence, k: int, p0=None) -> list:
    """``[p_0, p_1, ..., p_k]`` from ``b_1..b_k`` by the Newton recursion.

    Coefficients beyond the supplied ones are taken as zero, which is exact
    when the polynomial degree is smaller than ``k``.
    """
    zero = b[0] * 0
    bb = list(b) + [zero] * max(0, k - len(b))
    p = [p0 if p0 is not None else zero]
    for r in range(1, k + 1):
        acc = bb[r - 1] * r if r % 2 else -(bb[r - 1] * r)
        for i in range(1, r):
            t = p[r - i] * bb[i - 1]
            acc = acc + t if i % 2 else acc - t
        p.append(acc)
    return p


def power_sums_symbolic(k: int) -> list[NPolynomial]:
    """``[p_1(n, alpha), ..., p_k(n, alpha)]`` as polynomials in ``n``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    b = coeffs_symbolic(k).entries
    out = []
    for r in range(1, k + 1):
        p = power_sum_formula(r).evaluate(b)
        if p.degree != 2 * r:
            raise ArithmeticError(
                f"p_{r} has degree {p.degree} in n, expected {2 * r}")
        out.append(p)
    return out


@dataclass(frozen=True)
class BoundPair:
    """Enclosure of the largest zero from the first k power sums.

    ``lower`` is ``ell_k`` exactly. ``upper`` is ``u_k`` rounded upward to
    ``digits`` significant decimal digits, so ``lower <= x_max < upper``.
    ``p_k`` and ``p_km1`` are kept exactly.
    """

    k: int
    n: int
    alpha: Fraction
    lower: Fraction
    upper: Fraction
    p_k: Fraction
    p_km1: Fraction
    digits: int

    def upper_exceeds(self, other: "BoundPair") -> bool:
        """Exact test ``u_self > u_other`` via ``p^(1/k)`` powers."""
        a, ka = self.p_k, self.k
        b, kb = other.p_k, other.k
        return a ** kb > b ** ka


def kth_root_upper(x: Fraction, k: int, digits: int) -> Fraction:
    """Smallest decimal with ``digits`` significant digits whose k-th power
    is at least ``x`` (``x > 0``)."""
    if x <= 0:
        raise ValueError("root of a nonpositive number")
    with mpmath.workdps(digits + 10):
        est = mpmath.root(mpmath.mpf(x.numerator) / x.denominator, k)
        exp10 = int(mpmath.floor(mpmath.log10(est))) - digits + 1
        m = int(mpmath.ceil(est / mpmath.power(10, exp10)))
    scale = Fraction(10) ** exp10
    cand = m * scale
    while cand ** k < x:
        m += 1
        cand = m * scale
    while m > 1 and ((m - 1) * scale) ** k >= x:
        m -= 1
        cand = m * scale
    return cand


def bounds_numeric(k: int, n: int, alpha, digits: int = 30) -> BoundPair:
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    if n < k:
        raise DomainError(f"need n >= k, got n={n}, k={k}")
    alpha = Fraction(alpha)
    b = coeffs_numeric(k, n, alpha).entries
    p = power_sums(b, k, p0=Fraction(n))
    if p[k - 1] <= 0:
        raise AssertionError("nonpositive power sum for a positive-rooted polynomial")
    return BoundPair(k=k, n=n, alpha=alpha, lower=p[k] / p[k - 1],
                     upper=kth_root_upper(p[k], k, digits), p_k=p[k],
                     p_km1=p[k - 1], digits=digits)


def bounds_all(kmax: int, n: int, alpha, digits: int = 30) -> list[BoundPair]:
    """``bounds_numeric`` for k = 1..kmax sharing one coefficient evaluation."""
    alpha = Fraction(alpha)
    if n < kmax:
        raise DomainError(f"need n >= k, got n={n}, k={kmax}")
    b = coeffs_numeric(kmax, n, alpha).entries
    p = power_sums(b, kmax, p0=Fraction(n))
    return [BoundPair(k=k, n=n, alpha=alpha, lower=p[k] / p[k - 1],
                      upper=kth_root_upper(p[k], k, digits), p_k=p[k],
                      p_km1=p[k - 1], digits=digits)
            for k in range(1, kmax + 1)]
