from fractions import Fraction

import mpmath
import pytest

from lagmarkov import markov
from lagmarkov.markov import (asymptotic_bounds, closed_form_bounds,
                              conjecture_c41, conjecture_c42, crossover,
                              exact_cn2, turan_constant)
from lagmarkov.recurrence import DomainError


def mp(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x


class TestExact:
    @pytest.mark.parametrize("alpha", [0, "1/2", 7, "-0.9"])
    def test_n1(self, alpha):
        ev = exact_cn2(1, alpha)
        exact = 1 / (markov.to_alpha(alpha) + 1)
        with mpmath.workdps(ev.digits):
            assert ev.lo == ev.hi == mp(exact)

    def test_n2_alpha0(self):
        ev = exact_cn2(2, 0, 1e-25)
        with mpmath.workdps(40):
            target = (3 + mpmath.sqrt(5)) / 2
        assert ev.lo <= target <= ev.hi
        assert ev.width <= 1e-25 * ev.lo

    def test_turan_n10(self):
        ev = exact_cn2(10, 0)
        c = turan_constant(10)
        assert abs(ev.value - c ** 2) <= 1e-15 * c ** 2
        # 1/(2 sin(pi/42)) = 6.69074...
        assert mpmath.nstr(c, 6) == "6.69074"

    def test_methods_agree(self):
        ev = exact_cn2(17, "5/3", 1e-18)
        other = ev.cross_check
        assert other.method == "coefficient_rootfind" and ev.overlaps(other)

    def test_precision_env(self, monkeypatch):
        monkeypatch.setenv(markov.PRECISION_ENV, "60")
        assert exact_cn2(5, 1).digits == 60
        monkeypatch.setenv(markov.PRECISION_ENV, "lots")
        with pytest.raises(DomainError):
            exact_cn2(5, 1)

    @pytest.mark.parametrize("alpha", [-1, "-1.5", "-0.999999999"])
    def test_wall(self, alpha):
        with pytest.raises(DomainError):
            exact_cn2(4, alpha)

    def test_bad_tol(self):
        with pytest.raises(DomainError):
            exact_cn2(4, 0, 1e-40)

    def test_limit_near_minus_one(self):
        alpha = Fraction(-999999, 10 ** 6)
        for n in (1, 5, 20):
            v = exact_cn2(n, alpha, 1e-15).value * mp(alpha + 1)
            target = n * (n + 1) / 2
            assert abs(v - target) <= 1e-4 * target


class TestTuran:
    def test_small(self):
        assert abs(turan_constant(1) - 1) < 1e-40
        with mpmath.workdps(50):
            assert abs(turan_constant(2) - (1 + mpmath.sqrt(5)) / 2) < 1e-40

    def test_domain(self):
        with pytest.raises(DomainError):
            turan_constant(0)


class TestClosedForms:
    def test_k3_lower_formula(self):
        n, alpha = 7, Fraction(3, 2)
        r = closed_form_bounds(n, alpha, "k3")
        t = alpha + 1
        assert r.lower == 2 * n * (n + 3 * t / 8) / (t * (alpha + 5))

    def test_dorfler_upper_tight_at_one(self):
        r = closed_form_bounds(1, "1/2", "dorfler")
        assert r.upper == Fraction(2, 3) == Fraction(1) / Fraction(3, 2)
        assert abs(mp(r.upper) - exact_cn2(1, "1/2").value) < 1e-14

    def test_large_alpha_gate(self):
        r = closed_form_bounds(3, 1, "large_alpha")
        assert r.lower is None and r.upper is None
        assert "alpha >= 2" in r.upper_reason
        assert not r.applicable

    def test_four_coeff_lower_gate(self):
        r = closed_form_bounds(3, 50, "four_coeff")
        assert r.lower is None and "(alpha+1)/6" in r.lower_reason
        assert r.upper is not None

    def test_k_gate(self):
        r = closed_form_bounds(4, 0, "k5")
        assert r.lower is None and r.upper is None

    def test_unknown(self):
        with pytest.raises(DomainError):
            closed_form_bounds(4, 0, "nope")

    @pytest.mark.parametrize("alpha", ["-0.5", 0, 3, 40])
    def test_sandwich_sample(self, alpha):
        n = 9
        ev = exact_cn2(n, alpha)
        for name in markov.FORMULAS:
            r = closed_form_bounds(n, alpha, name)
            if r.lower is not None:
                assert mp(r.lower) <= ev.hi * (1 + 1e-12), name
            if r.upper is not None:
                assert mp(r.upper) >= ev.lo * (1 - 1e-12), name


class TestAsymptotic:
    def test_alpha0_table_values(self):
        b = asymptotic_bounds(0)
        with mpmath.workdps(30):
            assert abs(b.ell[6] - mpmath.sqrt(mpmath.mpf(2073) / 5115)) < 1e-25
            assert abs(b.u[6] - mpmath.root(mpmath.mpf(2073) / 467775, 12)) < 1e-25
            assert b.ell[6] <= 2 / mpmath.pi <= b.u[6]
        assert b.ratio <= 1.1548

    def test_bessel_alpha1(self):
        b = asymptotic_bounds(1)
        c1 = 1 / mpmath.mpf(markov.J01)
        assert abs(mpmath.besseljzero(0, 1) - mpmath.mpf(markov.J01)) < 1e-14
        assert b.ell[6] <= c1 <= b.u[6]

    def test_branch_switch(self):
        assert asymptotic_bounds(100).upper_branch == "six_coeff"
        assert asymptotic_bounds(200).upper_branch == "large_alpha"

    def test_rho_decreases_in_k(self):
        b = asymptotic_bounds("2.5")
        assert b.rho[3] > b.rho[4] > b.rho[5] > b.rho[6] > 1


class TestCrossover:
    def test_values(self):
        assert abs(crossover("corollaryE") - 43.4) <= 0.5
        assert abs(crossover("corollary13") - 172) <= 2
        assert 120000 <= crossover("rho6_equals_2") <= 160000

    def test_unknown(self):
        with pytest.raises(DomainError):
            crossover("nope")

    def test_bracket_failure(self, monkeypatch):
        monkeypatch.setitem(markov.CROSSOVERS, "broken",
                            (lambda a: mpmath.mpf(1), 1.0, 10.0))
        with pytest.raises(markov.BracketError):
            crossover("broken")


class TestEvidence:
    def test_c42_k1(self):
        r = conjecture_c42(1)
        assert r.match and r.leading == markov.predicted_leading(1)

    def test_c42_k6(self):
        assert conjecture_c42(6).match

    def test_c42_range(self):
        with pytest.raises(DomainError):
            conjecture_c42(7)

    def test_c41(self):
        rows = conjecture_c41(5)
        assert all(r.in_bracket for r in rows)
        last = rows[-1]
        assert last.alpha == 10 ** 5
        assert 6 * 5 / 7 <= last.alpha_cn2 <= 15
        # trend toward n
        ratios = [abs(r.ratio_to_n - 1) for r in rows]
        assert ratios == sorted(ratios, reverse=True)
