"""Three-term recurrence for Q_n and the coefficients of the reciprocal R_n.

``Q_n`` is the monic orthogonal polynomial with

    Q_{n+1}(x) = (x - d_n) Q_n(x) - lam2_n Q_{n-1}(x),
    d_0 = alpha + 1,  d_n = 2 + alpha/(n+1),  lam2_n = 1 + alpha/n.

``R_n(x) = x^n - b_1 x^{n-1} + b_2 x^{n-2} - ... + (-1)^n b_n`` is the
reciprocal of ``Q_n`` normalised to value 1 at the origin; its largest
zero is the squared Markov constant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactcore import AlphaFunction, NPolynomial, interpolate_in_n

log = logging.getLogger(__name__)

Alpha = Union[Fraction, AlphaFunction]

#: Largest k for which the symbolic pipeline is validated.
MAX_SYMBOLIC_K = 6


class DomainError(ValueError):
    """Parameter outside the admissible range (alpha <= -1, n < k, ...)."""


def check_alpha(alpha) -> Alpha:
    if alpha is None or isinstance(alpha, AlphaFunction):
        return AlphaFunction.variable() if alpha is None else alpha
    alpha = Fraction(alpha)
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal matrix whose characteristic polynomial is Q_n."""

    n: int
    alpha: Alpha
    diagonal: tuple
    offdiag_squared: tuple

    def offdiag(self, dps: int = 30):
        """Numeric off-diagonal entries ``sqrt(lam2_m)`` (fixed alpha only)."""
        import mpmath

        if isinstance(self.alpha, AlphaFunction):
            raise TypeError("off-diagonal square roots need a numeric alpha")
        with mpmath.workdps(dps):
            return tuple(mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)
                         for x in self.offdiag_squared)


def diagonal_entry(m: int, alpha: Alpha):
    if m == 0:
        return alpha + 1
    return 2 + alpha / (m + 1) if isinstance(alpha, AlphaFunction) else \
        2 + alpha / Fraction(m + 1)


def offdiag_squared_entry(m: int, alpha: Alpha):
    return 1 + alpha / m if isinstance(alpha, AlphaFunction) else \
        1 + alpha / Fraction(m)


def jacobi_matrix(n: int, alpha) -> JacobiMatrix:
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    alpha = check_alpha(alpha)
    diag = tuple(diagonal_entry(m, alpha) for m in range(n))
    off = tuple(offdiag_squared_entry(m, alpha) for m in range(1, n))
    return JacobiMatrix(n, alpha, diag, off)


def eval_Q(n: int, alpha, x):
    """Value of Q_n(x) by the forward recurrence (exact for rational input)."""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    alpha = check_alpha(alpha)
    if not isinstance(alpha, AlphaFunction):
        x = Fraction(x)
    prev, cur = 0, 1
    for m in range(n):
        nxt = (x - diagonal_entry(m, alpha)) * cur
        if m:
            nxt = nxt - offdiag_squared_entry(m, alpha) * prev
        prev, cur = cur, nxt
    return cur


def Q_coefficients(n: int, alpha) -> list:
    """Coefficients of Q_n (lowest power first) by expanding the recurrence."""
    alpha = check_alpha(alpha)
    zero = alpha * 0
    prev: list = []
    cur: list = [zero + 1]
    for m in range(n):
        d = diagonal_entry(m, alpha)
        nxt = [zero] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - d * c
        if m:
            lam2 = offdiag_squared_entry(m, alpha)
            for i, c in enumerate(prev):
                nxt[i] = nxt[i] - lam2 * c
        prev, cur = cur, nxt
    return cur


def coefficient_table(k: int, n_max: int, alpha) -> list[list]:
    """``A[i][m]`` for ``0 <= i <= k`` and ``0 <= m <= n_max``.

    Row ``i`` is obtained from row ``i-1`` by the first-order recurrence

        D_{i,m+1} = (m+1)/(m+alpha+1) * (D_{i,m} + A_{i-1,m}),  D_{i,i-1} = 0,

    and ``A_{i,m}`` is the running sum of ``D_{i,i..m}``. Entries with
    ``m < i`` are zero.
    """
    alpha = check_alpha(alpha)
    zero = alpha * 0
    ratios = [(m + 1) / (alpha + (m + 1)) if isinstance(alpha, AlphaFunction)
              else Fraction(m + 1) / (alpha + m + 1) for m in range(n_max)]
    table = [[zero + 1] * (n_max + 1)]
    for i in range(1, k + 1):
        row = [zero] * (n_max + 1)
        prev_row = table[i - 1]
        d = zero
        acc = zero
        for m in range(i - 1, n_max):
            d = ratios[m] * (d + prev_row[m])
            acc = acc + d
            row[m + 1] = acc
        table.append(row)
    return table


@dataclass(frozen=True)
class RnCoefficients:
    """Leading coefficients ``b_1..b_k`` of R_n.

    In numeric mode ``entries`` are exact values (``Fraction`` for rational
    alpha, ``AlphaFunction`` for symbolic alpha) and ``n`` is an integer. In
    symbolic mode ``entries`` are ``NPolynomial`` and ``n`` is ``None``.
    """

    k: int
    entries: tuple
    n: int | None
    alpha: Alpha | None

    @property
    def symbolic(self) -> bool:
        return self.n is None

    def __getitem__(self, i: int):
        """1-based access, ``coeffs[i] == b_i``."""
        if i < 1 or i > self.k:
            raise IndexError(i)
        return self.entries[i - 1]

    def evaluate(self, n: int, alpha) -> tuple[Fraction, ...]:
        if not self.symbolic:
            raise TypeError("already numeric")
        return tuple(b(n, Fraction(alpha)) for b in self.entries)


def coeffs_numeric(k: int, n: int, alpha) -> RnCoefficients:
    """Exact ``b_1..b_k`` of R_n at fixed ``n`` (alpha rational or symbolic)."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if n < k:
        raise DomainError(f"need n >= k, got n={n}, k={k}")
    alpha = check_alpha(alpha)
    table = coefficient_table(k, n, alpha)
    return RnCoefficients(k, tuple(table[i][n] for i in range(1, k + 1)),
                          n, alpha)


class InterpolationFailure(RuntimeError):
    pass


_symbolic_cache: dict[int, tuple[NPolynomial, ...]] = {}


def coeffs_symbolic(k: int, max_retries: int = 3) -> RnCoefficients:
    """``b_i(n, alpha)`` as polynomials in ``n`` for ``i = 1..k``.

    Each ``b_i`` is sampled at ``2i + 1`` consecutive values of ``n``
    starting at ``i``, interpolated with degree bound ``2i`` and checked at
    two further points. A failed check raises the bound by two.
    """
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if k > MAX_SYMBOLIC_K:
        log.warning("k=%d exceeds the validated range k <= %d", k,
                    MAX_SYMBOLIC_K)
    known = [_symbolic_cache[i] for i in range(1, k + 1)
             if i in _symbolic_cache]
    if len(known) == k:
        return RnCoefficients(k, tuple(known), None, None)

    alpha = AlphaFunction.variable()
    n_max = 3 * k + 2
    table = coefficient_table(k, n_max, alpha)
    out = []
    for i in range(1, k + 1):
        if i in _symbolic_cache:
            out.append(_symbolic_cache[i])
            continue
        bound = 2 * i
        for attempt in range(max_retries + 1):
            last = i + bound + 2
            if last > n_max:
                n_max = last
                table = coefficient_table(k, n_max, alpha)
            nodes = range(i, last + 1)
            samples = [(m, table[i][m]) for m in nodes]
            try:
                poly = interpolate_in_n(samples, bound)
            except ValueError:
                log.info("b_%d: degree bound %d rejected", i, bound)
                bound += 2
                continue
            break
        else:
            raise InterpolationFailure(
                f"b_{i}: no polynomial of degree <= {bound - 2} in n fits the "
                f"recurrence samples after {max_retries} retries")
        if poly.degree != 2 * i:
            raise InterpolationFailure(
                f"b_{i} has degree {poly.degree} in n, expected {2 * i}")
        _symbolic_cache[i] = poly
        out.append(poly)
    return RnCoefficients(k, tuple(out), None, None)
