"""Randomised checks with hypothesis."""

from fractions import Fraction

import mpmath
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lagmarkov.certifier import CoeffMatrix, lambda_reduce
from lagmarkov.exactcore import (AlphaFunction, AlphaPolynomial, Positivity,
                                 positive_axis_nonnegative)
from lagmarkov.markov import exact_cn2
from lagmarkov.newton_bounds import (bounds_all, power_sum_formula,
                                     power_sum_recursive, power_sums)
from lagmarkov.recurrence import Q_coefficients, coeffs_numeric

alphas = st.fractions(min_value=Fraction(-9, 10), max_value=50,
                      max_denominator=60)
small_ints = st.integers(min_value=-30, max_value=30)
FAST = settings(max_examples=40, deadline=None)


@FAST
@given(n=st.integers(1, 8), alpha=alphas)
def test_coefficients_match_expanded_Q(n, alpha):
    q = Q_coefficients(n, alpha)            # lowest power first
    b = coeffs_numeric(n, n, alpha).entries
    for i in range(1, n + 1):
        assert b[i - 1] == (-1) ** i * q[i] / q[0]


@settings(max_examples=5, deadline=None)
@given(n=st.integers(1, 6))
def test_coefficients_match_expanded_Q_symbolic(n):
    q = Q_coefficients(n, None)
    b = coeffs_numeric(n, n, None).entries
    for i in range(1, n + 1):
        assert b[i - 1] == q[i] / q[0] * (-1) ** i


@FAST
@given(b=st.lists(st.fractions(max_denominator=20, min_value=-5, max_value=5),
                  min_size=6, max_size=6))
def test_newton_determinant_equals_recursion_numerically(b):
    p = power_sums(b, 6, p0=Fraction(6))
    for r in range(1, 7):
        assert power_sum_formula(r).evaluate(b) == p[r]
        assert power_sum_recursive(r).evaluate(b) == p[r]


@FAST
@given(n=st.integers(6, 30), alpha=alphas)
def test_bounds_monotone_in_k(n, alpha):
    bs = bounds_all(6, n, alpha)
    for lo, hi in zip(bs, bs[1:]):
        assert lo.lower <= hi.lower
        # exact comparison of k-th roots
        assert lo.p_k ** hi.k >= hi.p_k ** lo.k


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 60), alpha=alphas)
def test_two_methods_agree(n, alpha):
    ev = exact_cn2(n, alpha, 1e-14)
    assert ev.overlaps(ev.cross_check)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 40), alpha=alphas)
def test_enclosure(n, alpha):
    ev = exact_cn2(n, alpha, 1e-16, cross_check=False)
    for bp in bounds_all(min(6, n), n, alpha):
        lower = mpmath.mpf(bp.lower.numerator) / bp.lower.denominator
        upper = mpmath.mpf(bp.upper.numerator) / bp.upper.denominator
        assert lower <= ev.hi * (1 + mpmath.mpf(10) ** -12)
        assert ev.lo < upper


@FAST
@given(p=st.lists(small_ints, min_size=1, max_size=4),
       q=st.lists(small_ints, min_size=1, max_size=3),
       r=st.lists(small_ints, min_size=1, max_size=3))
def test_alpha_function_field_laws(p, q, r):
    P, Q, R = (AlphaFunction(AlphaPolynomial(x)) for x in (p, q, r))
    assume(not R.is_zero())
    assert (P + Q) * R == P * R + Q * R
    assert (P * Q) / R == P * (Q / R)
    assert (P / R) * R == P
    assert P - P == AlphaFunction.constant(0)


@FAST
@given(roots=st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7),
                      min_size=1, max_size=4),
       lead=st.integers(1, 5))
def test_positivity_verdicts(roots, lead):
    p = AlphaPolynomial([lead], shifted=True)
    for x in roots:
        p = p * AlphaPolynomial([-x, 1], shifted=True)
    verdict = positive_axis_nonnegative(p)
    odd_positive = any(roots.count(x) % 2 for x in set(roots) if x > 0)
    if odd_positive:
        assert verdict is Positivity.HAS_POSITIVE_ROOT
    else:
        assert verdict is Positivity.PROVEN_NONNEGATIVE
        for t in (Fraction(1, 100), Fraction(1, 3), 1, 2, 7, 100):
            assert p(t) >= 0


@FAST
@given(entries=st.lists(st.integers(-50, 50), min_size=5 * 3, max_size=5 * 3),
       base=st.integers(2, 6),
       n_off=st.integers(0, 20),
       t=st.fractions(min_value=Fraction(1, 50), max_value=100, max_denominator=50))
def test_reduction_never_increases(entries, base, n_off, t):
    rows = tuple(tuple(entries[3 * i:3 * i + 3]) for i in range(5))
    M = CoeffMatrix(3, 2, rows)
    lam, residuals = lambda_reduce(M, base)
    n = base + n_off
    alpha = t - 1
    assert lam.phi(n, alpha) <= M.phi(n, alpha)
    flagged = {(i, j) for i, j in residuals}
    for i, row in enumerate(lam.rows, 1):
        for j, x in enumerate(row):
            assert x >= 0 or (i, j) in flagged
