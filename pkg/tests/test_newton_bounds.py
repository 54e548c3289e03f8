from fractions import Fraction

import pytest

from lagmarkov.exactcore import AlphaFunction
from lagmarkov.newton_bounds import (bounds_all, bounds_numeric, kth_root_upper,
                                     power_sum_formula, power_sum_recursive,
                                     power_sums, power_sums_symbolic)
from lagmarkov.recurrence import DomainError

a = AlphaFunction.variable()


class TestFormulas:
    def test_low_orders(self):
        assert power_sum_formula(1).as_dict() == {(1,): 1}
        assert power_sum_formula(2).as_dict() == {(2, 0): 1, (0, 1): -2}
        assert power_sum_formula(3).as_dict() == {(3, 0, 0): 1, (1, 1, 0): -3,
                                                  (0, 0, 1): 3}

    def test_display(self):
        assert str(power_sum_formula(3)) == "p3 = +1*b1^3 -3*b1*b2 +3*b3"

    @pytest.mark.parametrize("r", range(1, 7))
    def test_determinant_equals_recursion(self, r):
        assert power_sum_formula(r) == power_sum_recursive(r)

    @pytest.mark.parametrize("r", range(1, 7))
    def test_isobaric(self, r):
        assert power_sum_formula(r).weighted_degrees() == {r}

    def test_against_explicit_roots(self):
        roots = [Fraction(1), Fraction(2), Fraction(5, 2), Fraction(7)]
        e = [Fraction(0)] * 5
        e[0] = Fraction(1)
        for x in roots:
            for i in range(4, 0, -1):
                e[i] += e[i - 1] * x
        b = e[1:]
        p = power_sums(b, 4, p0=Fraction(4))
        assert p == [sum(x ** r for x in roots) for r in range(5)]
        for r in range(1, 5):
            assert power_sum_formula(r).evaluate(b) == p[r]


class TestSymbolic:
    def test_p1(self):
        p1 = power_sums_symbolic(1)[0]
        assert p1.coeff(2) == 1 / (2 * (a + 1)) and p1.coeff(1) == 1 / (2 * (a + 1))

    def test_leading_ratio_k3(self):
        ps = power_sums_symbolic(3)
        assert ps[2].lc / ps[1].lc == 2 / ((a + 1) * (a + 5))

    def test_leading_p3(self):
        assert power_sums_symbolic(3)[2].lc == 1 / ((a + 1) ** 3 * (a + 3) * (a + 5))


class TestBounds:
    @pytest.mark.parametrize("n,alpha", [(1, 0), (4, Fraction(1, 2)), (9, 3)])
    def test_k1(self, n, alpha):
        bp = bounds_numeric(1, n, alpha)
        t = Fraction(alpha) + 1
        assert bp.lower == Fraction(n + 1) / (2 * t)
        assert bp.p_k == Fraction(n * (n + 1)) / (2 * t)
        assert bp.upper >= bp.p_k and bp.upper - bp.p_k < Fraction(1, 10 ** 25) * bp.p_k

    def test_single_zero(self):
        bp = bounds_numeric(1, 1, Fraction(2, 3))
        assert bp.lower == bp.p_k == Fraction(3, 5)

    def test_k3_asymptotics_at_zero(self):
        n = 4000
        bp = bounds_numeric(3, n, 0)
        assert abs(bp.lower / n ** 2 - Fraction(2, 5)) < Fraction(1, 1000)
        assert abs(float(bp.p_k) ** (1 / 3) / n ** 2 - (1 / 15) ** (1 / 3)) < 1e-3

    def test_monotone_in_k(self):
        bs = bounds_all(6, 12, Fraction(1, 2))
        for lo, hi in zip(bs, bs[1:]):
            assert lo.lower <= hi.lower
            assert not hi.upper_exceeds(lo)

    def test_domain(self):
        with pytest.raises(DomainError):
            bounds_numeric(4, 3, 0)
        with pytest.raises(DomainError):
            bounds_numeric(2, 3, -1)

    def test_root_rounding(self):
        x = Fraction(2)
        r = kth_root_upper(x, 2, 20)
        assert r * r >= 2
        assert (r - Fraction(1, 10 ** 19)) ** 2 < 2
        assert kth_root_upper(Fraction(27, 8), 3, 10) == Fraction(3, 2)
        with pytest.raises(ValueError):
            kth_root_upper(Fraction(0), 2, 5)
