"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line through the ``criterion`` fixture; the
lines are printed in the terminal summary (see conftest.py).
"""

import math
import random
import time
from fractions import Fraction

import mpmath
import sympy

from lagmarkov import cli, fixtures, markov
from lagmarkov.certifier import certify
from lagmarkov.exactcore import AlphaFunction, AlphaPolynomial, Positivity
from lagmarkov.newton_bounds import (bounds_all, power_sum_formula,
                                     power_sum_recursive)
from lagmarkov.recurrence import (coeffs_numeric, diagonal_entry,
                                  offdiag_squared_entry)

SIDES = ("lower", "upper")
KS = (3, 4, 5, 6)


def mp(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x


def test_tables_1_2(criterion):
    with criterion(1, "certified (c, sigma) equal the published tables") as rec:
        timings = {}
        for side in SIDES:
            for k in KS:
                start = time.perf_counter()
                cert = certify(k, side)
                timings[(k, side)] = time.perf_counter() - start
                c_ref, s_ref = fixtures.table_entry(side, k)
                assert cert.certified, (k, side, cert.failures)
                assert cert.c == c_ref, (k, side, "c")
                assert cert.sigma == s_ref, (k, side, "sigma")
        small = max(v for (k, _), v in timings.items() if k <= 4)
        total = sum(timings.values())
        assert small <= 10 and total <= 600
        rec.detail = f"8/8 exact, total {total:.2f}s, k<=4 max {small:.2f}s"


def test_matrices(criterion):
    with criterion(2, "M and Lambda for k=3,4 both sides entrywise") as rec:
        for side in SIDES:
            for k in (3, 4):
                cert = certify(k, side)
                M_ref, L_ref = fixtures.matrices(side, k)
                assert [list(r) for r in cert.M.rows] == M_ref, (side, k, "M")
                assert [list(r) for r in cert.Lambda.rows] == L_ref, (side, k, "Lambda")
        low3, up3 = certify(3, "lower"), certify(3, "upper")
        assert low3.base == 4 and up3.base == 3
        assert -4 in low3.Lambda.rows[0]
        rec.detail = "4 sides x 2 matrices, bases 4/3 for k=3"


def test_k3_lower_proofs(criterion):
    with criterion(3, "k=3 lower residual row and n=3 boundary proven") as rec:
        cert = certify(3, "lower")
        (row, poly, verdict), = cert.residual_rows
        # 4t^3 - 4t^2 + 225t + 360, lowest power first
        assert row == 1 and poly == AlphaPolynomial((360, 225, -4, 4), shifted=True)
        assert verdict is Positivity.PROVEN_NONNEGATIVE
        (n, _, bverdict), = cert.boundary_checks
        assert n == 3 and bverdict is Positivity.PROVEN_NONNEGATIVE
        assert cert.status == "certified"
        rec.detail = "status certified"


def test_table3(criterion):
    with criterion(4, "c(0) bounds table to 8 digits") as rec:
        rows, diffs = cli.table3_rows()
        assert not diffs, diffs
        c0 = 2 / mpmath.pi
        worst = 0
        for k in KS:
            ref = fixtures.table3_row(k)
            got = {"ell": markov.ell_k(0, k), "u": markov.u_k(0, k)}
            got["c_over_ell"] = c0 / got["ell"]
            got["u_over_c"] = got["u"] / c0
            for key, val in got.items():
                err = abs(val - mpmath.mpf(ref[key]))
                worst = max(worst, err)
                assert err < 1e-8, (k, key)
        assert rows[0][1] == "0.63245553" and rows[3][2] == "0.63661987"
        rec.detail = f"16 values, max abs error {mpmath.nstr(worst, 3)}"


def test_turan(criterion):
    with criterion(5, "alpha=0 matches 1/(2 sin(pi/(4n+2)))^2 for n<=200") as rec:
        worst = mpmath.mpf(0)
        with mpmath.workdps(40):
            for n in range(1, 201):
                exact = 1 / (2 * mpmath.sin(mpmath.pi / (4 * n + 2))) ** 2
                got = markov.exact_cn2(n, 0, cross_check=False).value
                worst = max(worst, abs(got - exact) / exact)
        assert worst <= 1e-10
        rec.detail = f"max relative error {mpmath.nstr(worst, 3)}"


SANDWICH_ALPHAS = [Fraction(x) for x in
                   ("-0.99", "-0.5", "0", "0.5", "1", "2", "5", "10", "50", "100")]


def _sandwich_violations(slack):
    """Return ``(number of checks, violations)`` over the acceptance grid."""
    checks, bad = 0, []
    for n in range(3, 41):
        for a in SANDWICH_ALPHAS:
            ev = markov.exact_cn2(n, a, 1e-20, cross_check=False)
            lo, hi = ev.lo, ev.hi
            for k in KS:
                if n < k:
                    continue
                bp = bounds_all(k, n, a)[-1]
                ell, u = mp(bp.lower), mp(bp.upper)
                r = markov.closed_form_bounds(n, a, f"k{k}")
                chain = [mp(r.lower) <= ell * (1 + slack), ell <= hi * (1 + slack),
                         lo < u, u <= r.upper * (1 + slack)]
                checks += 1
                if not all(chain):
                    bad.append((n, str(a), k, chain))
            names = ["dorfler"]
            if a >= 2:
                names += ["large_alpha", "order_alpha"]
            for name in names:
                r = markov.closed_form_bounds(n, a, name)
                if name != "large_alpha":
                    checks += 1
                    if r.lower is None or mp(r.lower) > hi * (1 + slack):
                        bad.append((n, str(a), name, "lower"))
                checks += 1
                if r.upper is None or mp(r.upper) < lo * (1 - slack):
                    bad.append((n, str(a), name, "upper"))
    return checks, bad


def test_sandwich(criterion):
    with criterion(6, "sandwich grid n 3..40, 10 alphas, k 3..6") as rec:
        # 40 digits: near alpha = -1 the gap between c_n^2 and u_k is ~1e-17 relative
        with mpmath.workdps(40):
            checks, bad = _sandwich_violations(mpmath.mpf("1e-12"))
        assert not bad, bad[:5]
        rec.detail = f"{checks} inequality checks, 0 violations"


def test_crossovers(criterion):
    with criterion(7, "crossover roots within stated windows") as rec:
        e = markov.crossover("corollaryE")
        c13 = markov.crossover("corollary13")
        r6 = markov.crossover("rho6_equals_2")
        assert abs(e - 43.4) <= 0.5
        assert abs(c13 - 172) <= 2
        assert 120000 <= r6 <= 160000
        rec.detail = (f"{mpmath.nstr(e, 6)}, {mpmath.nstr(c13, 6)}, "
                      f"{mpmath.nstr(r6, 7)}")


def test_ratio(criterion):
    with criterion(8, "max upper/lower asymptotic ratio <= 1.15480") as rec:
        # 10^4 points, log spaced in alpha+1 over [1e-6, 1e6+1]
        lo_exp, hi_exp = -6.0, math.log10(1e6 + 1)
        worst, where = mpmath.mpf(0), None
        for i in range(10000):
            t = 10 ** (lo_exp + (hi_exp - lo_exp) * i / 9999)
            alpha = Fraction(repr(t)) - 1
            if i == 9999:
                alpha = Fraction(10 ** 6)
            r = markov.asymptotic_bounds(alpha).ratio
            if r > worst:
                worst, where = r, alpha
        assert worst <= 1.15480
        rec.detail = f"max {mpmath.nstr(worst, 8)} at alpha={float(where):.6g}"


def test_leading_coefficient(criterion):
    with criterion(9, "leading n^(2k) coefficient of b_k for k=1..6") as rec:
        a = AlphaFunction.variable()
        for k in range(1, 7):
            report = markov.conjecture_c42(k)
            den = AlphaFunction.constant(2 ** k * math.factorial(k))
            for j in range(1, 2 * k, 2):
                den = den * (a + j)
            assert report.leading == 1 / den, k
        rec.detail = "6/6 exact"


def _charpoly_coeffs(n, alpha):
    """Characteristic polynomial of the (nonsymmetric) tridiagonal matrix,
    expanded by sympy; lowest power first."""
    x = sympy.Symbol("x")
    J = sympy.zeros(n, n)
    for m in range(n):
        J[m, m] = sympy.Rational(str(diagonal_entry(m, alpha)))
        if m + 1 < n:
            J[m, m + 1] = sympy.Rational(str(offdiag_squared_entry(m + 1, alpha)))
            J[m + 1, m] = 1
    poly = sympy.Poly((x * sympy.eye(n) - J).det(), x)
    return [Fraction(str(c)) for c in reversed(poly.all_coeffs())]


def test_property_suites(criterion):
    with criterion(10, "oracle, Newton, monotonicity and two-method suites") as rec:
        rng = random.Random(10)
        # brute force: R_n coefficients from the expanded characteristic polynomial
        oracle = 0
        for n in range(1, 9):
            for alpha in (Fraction(0), Fraction(-9, 10), Fraction(7, 3), Fraction(40)):
                q = _charpoly_coeffs(n, alpha)
                b = coeffs_numeric(n, n, alpha).entries
                for i in range(1, n + 1):
                    assert b[i - 1] == (-1) ** i * q[i] / q[0], (n, alpha, i)
                oracle += 1
        # determinant formula against Newton recursion
        for r in range(1, 7):
            assert power_sum_formula(r).as_dict() == power_sum_recursive(r).as_dict()
            for _ in range(20):
                b = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(r)]
                assert power_sum_formula(r).evaluate(b) == power_sum_recursive(r).evaluate(b)
        # monotonicity in k
        for n in (6, 10, 25, 60):
            for alpha in (Fraction(-9, 10), Fraction(0), Fraction(3), Fraction(200)):
                bs = bounds_all(6, n, alpha)
                for lo, hi in zip(bs, bs[1:]):
                    assert lo.lower <= hi.lower
                    assert lo.p_k ** hi.k >= hi.p_k ** lo.k
        # two independent evaluations of c_n^2
        worst = mpmath.mpf(0)
        pairs = 0
        for alpha in ("-0.9", "0", "1", "10"):
            for n in range(1, 101):
                ev = markov.exact_cn2(n, alpha, 1e-14)
                other = ev.cross_check
                if other is None:       # n = 1 is closed form
                    continue
                rel = abs(ev.value - other.value) / ev.value
                worst = max(worst, rel)
                assert rel <= 1e-12, (n, alpha)
                pairs += 1
        rec.detail = (f"{oracle} oracle cases, {pairs} method pairs, "
                      f"max rel diff {mpmath.nstr(worst, 3)}")
