"""Positivity certificates for the two-sided bounds on c_n^2(alpha).

Lower side, ``k`` power sums::

    f = p_k - c * n * (n + sigma*(alpha+1)) * p_{k-1} >= 0

Upper side::

    f = c * (n+1)^k * (n + sigma*(alpha+1))^k - p_k >= 0

Writing ``t = alpha + 1`` and ``f = phi(n, t) / psi(alpha)`` with ``psi > 0``,
the integer matrix ``M`` holds the coefficients of ``phi`` on the basis
``n^(2k-i) * t^(d-j)``. The reduction to ``Lambda`` trades each negative
entry against the nearest positive entry above it in the same column, which
can only lower ``phi`` for ``n >= base``. A reduced matrix with nonnegative
entries (or whose leftover negative rows are nonnegative polynomials in
``t``) proves ``f >= 0``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exactcore import (AlphaFunction, AlphaPolynomial, NPolynomial,
                        Positivity, count_positive_roots, format_rational,
                        parse_rational, positive_axis_nonnegative,
                        shift_to_alpha_plus_one)
from .newton_bounds import power_sums, power_sums_symbolic
from .recurrence import DomainError, coeffs_numeric

log = logging.getLogger(__name__)

SIDES = ("lower", "upper")
MIN_K, MAX_K = 3, 6
PROMOTION_MAX_DENOMINATOR = 64


class CertificationError(RuntimeError):
    """The pipeline could not even set up a certificate (bad row shapes...)."""


def _check_k_side(k: int, side: str) -> None:
    if side not in SIDES:
        raise DomainError(f"side must be 'lower' or 'upper', got {side!r}")
    if not MIN_K <= k <= MAX_K:
        raise DomainError(
            f"k must lie in {MIN_K}..{MAX_K} (the symbolic pipeline is not "
            f"validated beyond k=6), got {k}")


def default_base(k: int, side: str) -> int:
    """The k=3 lower certificate needs n >= 4, so it reduces with base 4."""
    return k + 1 if (k == 3 and side == "lower") else k


# ---------------------------------------------------------------------------
# symbolic f_s
# ---------------------------------------------------------------------------


def _t() -> AlphaFunction:
    return AlphaFunction.variable() + 1


def leading_constant(k: int, side: str) -> AlphaFunction:
    """``c``: leading n-coefficient of p_k/p_{k-1} (lower) or of p_k (upper)."""
    _check_k_side(k, side)
    ps = power_sums_symbolic(k)
    if side == "lower":
        return ps[k - 1].lc / ps[k - 2].lc
    return ps[k - 1].lc


def f_parts(k: int, side: str, c: AlphaFunction) -> list[NPolynomial]:
    """``[F_0, F_1, ...]`` with ``f_s = sum_m s^m F_m``."""
    ps = power_sums_symbolic(k)
    pk, pkm1 = ps[k - 1], ps[k - 2]
    n = NPolynomial.n()
    t = _t()
    if side == "lower":
        return [pk - (n * n * pkm1) * c, -(n * pkm1) * (c * t)]
    base = (n + 1) ** k
    parts = [base * n ** k * c - pk]
    for m in range(1, k + 1):
        parts.append(base * n ** (k - m) * (c * math.comb(k, m) * t ** m))
    return parts


def f_at_sigma(k: int, side: str, c: AlphaFunction, sigma: Fraction) -> NPolynomial:
    total = NPolynomial()
    for m, part in enumerate(f_parts(k, side, c)):
        total = total + part * (Fraction(sigma) ** m)
    return total


def _lcm_denominator(polys: Sequence[NPolynomial]) -> AlphaPolynomial:
    den = AlphaPolynomial([1])
    for p in polys:
        d = p.common_denominator()
        den = (den * d).divmod(den.gcd(d))[0].monic()
    return den


def _t_rows(p: NPolynomial, psi: AlphaPolynomial) -> dict[int, AlphaPolynomial]:
    """``{power of n: numerator coefficient as a polynomial in t}``."""
    psi_f = AlphaFunction(psi)
    rows = {}
    for e, coef in enumerate(p.coeffs):
        q = coef * psi_f
        if q.is_zero():
            continue
        den = q.den
        if den.degree != 0:
            raise ArithmeticError("common denominator does not clear a coefficient")
        rows[e] = shift_to_alpha_plus_one(q.num * (1 / den.lc))
    return rows


# ---------------------------------------------------------------------------
# sigma search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    """Row-leading coefficient ``A*s^nu - B`` of the row ``n^power``.

    ``zero`` is the exact root when rational; ``used`` marks candidates that
    take part in the min/max.
    """

    row: int
    power: int
    t_degree: int
    A: Fraction
    B: Fraction
    nu: int
    zero: Optional[Fraction]
    used: bool
    note: str = ""

    def root_power(self) -> Fraction:
        """``zero ** nu`` exactly, i.e. ``B/A``."""
        return self.B / self.A

    def to_json(self) -> dict:
        return {"row": self.row, "power_of_n": self.power,
                "t_degree": self.t_degree, "A": format_rational(self.A),
                "B": format_rational(self.B), "nu": self.nu,
                "zero": None if self.zero is None else format_rational(self.zero),
                "used": self.used, "note": self.note}

    @classmethod
    def from_json(cls, d: dict) -> "Candidate":
        return cls(d["row"], d["power_of_n"], d["t_degree"],
                   parse_rational(d["A"]), parse_rational(d["B"]), d["nu"],
                   None if d["zero"] is None else parse_rational(d["zero"]),
                   d["used"], d.get("note", ""))


@dataclass(frozen=True)
class SigmaChoice:
    c: AlphaFunction
    sigma: Fraction
    candidates: tuple[Candidate, ...]
    promoted: bool = False


def _exact_root(x: Fraction, nu: int) -> Optional[Fraction]:
    """Rational nu-th root of ``x >= 0`` if it exists."""
    if x == 0:
        return Fraction(0)
    num = _int_root(x.numerator, nu)
    den = _int_root(x.denominator, nu)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _int_root(m: int, nu: int) -> Optional[int]:
    r = round(m ** (1.0 / nu)) if m < 2 ** 1000 else None
    if r is None:
        lo, hi = 0, 1 << (m.bit_length() // nu + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** nu < m:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** nu == m:
            return cand
    return None


def _root_gt(a: Candidate, b: Candidate) -> bool:
    """``a.zero_real > b.zero_real`` compared exactly through powers."""
    L = a.nu * b.nu // math.gcd(a.nu, b.nu)
    return a.root_power() ** (L // a.nu) > b.root_power() ** (L // b.nu)


def _promote(cand: Candidate) -> Fraction:
    """Smallest fraction with denominator <= 64 that is >= the irrational root."""
    best = None
    for q in range(1, PROMOTION_MAX_DENOMINATOR + 1):
        # smallest p with (p/q)^nu >= B/A
        target = cand.root_power()
        p = int(float(target) ** (1.0 / cand.nu) * q)
        p = max(p - 2, 0)
        while Fraction(p, q) ** cand.nu < target:
            p += 1
        x = Fraction(p, q)
        if best is None or x < best:
            best = x
    return best


def sigma_search(k: int, side: str) -> SigmaChoice:
    """Optimal shift from the row-leading coefficients of ``f_s``.

    For each power of ``n``, the coefficient of the highest power of ``t``
    that is not identically zero in ``s`` is taken. Lower side: it must be
    ``A - B s`` and the candidates with ``A, B > 0`` give ``sigma = min A/B``.
    Upper side: it must be ``A s^nu - B`` with ``A > 0, B >= 0`` and
    ``sigma`` is the largest nonnegative root.
    """
    _check_k_side(k, side)
    c = leading_constant(k, side)
    parts = f_parts(k, side, c)
    psi = _lcm_denominator(parts)
    part_rows = [_t_rows(p, psi) for p in parts]
    powers = sorted({e for rows in part_rows for e in rows}, reverse=True)
    if not powers:
        raise CertificationError("f_s vanishes identically")
    top = 2 * k
    candidates = []
    for e in powers:
        if e >= top:
            raise CertificationError(f"n^{e} term survives; c is not the leading constant")
        row = top - e
        deg = max(rows[e].degree for rows in part_rows if e in rows)
        lead = {m: rows[e].coeff(deg) for m, rows in enumerate(part_rows)
                if e in rows and rows[e].coeff(deg)}
        if not lead:
            raise CertificationError(f"row n^{e}: empty leading coefficient")
        s_terms = {m: v for m, v in lead.items() if m > 0}
        const = lead.get(0, Fraction(0))
        if not s_terms:
            candidates.append(Candidate(row, e, deg, Fraction(0), -const, 0,
                                        None, False, "independent of s"))
            continue
        if len(s_terms) > 1:
            raise CertificationError(
                f"row n^{e}: leading coefficient {lead} is not of the form "
                f"A*s^nu - B")
        (nu, A), = s_terms.items()
        B = -const
        if side == "lower":
            if nu != 1:
                raise CertificationError(
                    f"row n^{e}: leading coefficient is not linear in s: {lead}")
            # stored as A*s - B'; the lower rule reads it as A' - B' s
            A_low, B_low = const, -A
            if A_low > 0 and B_low > 0:
                candidates.append(Candidate(row, e, deg, A_low, B_low, 1,
                                            A_low / B_low, True))
            else:
                candidates.append(Candidate(
                    row, e, deg, A_low, B_low, 1,
                    A_low / B_low if B_low else None, False,
                    "sign pattern not A - B*s with A, B > 0"))
        else:
            if A > 0 and B >= 0:
                zero = _exact_root(B / A, nu)
                candidates.append(Candidate(row, e, deg, A, B, nu, zero, True,
                                            "" if zero is not None else "irrational"))
            else:
                candidates.append(Candidate(row, e, deg, A, B, nu, None, False,
                                            "sign pattern not A*s^nu - B"))
    used = [cd for cd in candidates if cd.used]
    if not used:
        raise CertificationError("no admissible row-leading coefficient")
    promoted = False
    if side == "lower":
        sigma = min(cd.zero for cd in used)
    else:
        best = used[0]
        for cd in used[1:]:
            if _root_gt(cd, best):
                best = cd
        if best.zero is not None:
            sigma = best.zero
        else:
            sigma = _promote(best)
            promoted = True
            log.warning("k=%d upper: irrational sigma promoted to %s", k, sigma)
    return SigmaChoice(c, sigma, tuple(candidates), promoted)


# ---------------------------------------------------------------------------
# integer coefficient matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoeffMatrix:
    """``(2k-1) x (d+1)`` integers; entry (i, j) multiplies n^(2k-i) t^(d-j).

    Rows and columns are stored 0-based: ``rows[i-1][j]``.
    """

    k: int
    d: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != 2 * self.k - 1:
            raise ValueError(f"expected {2 * self.k - 1} rows, got {len(self.rows)}")
        if any(len(r) != self.d + 1 for r in self.rows):
            raise ValueError(f"every row needs {self.d + 1} entries")

    def entry(self, i: int, j: int) -> int:
        """1-based row ``i``, 0-based column ``j`` as in the printed layout."""
        return self.rows[i - 1][j]

    def row_polynomial(self, i: int) -> AlphaPolynomial:
        """Row ``i`` as a polynomial in ``t = alpha + 1``."""
        return AlphaPolynomial(reversed(self.rows[i - 1]), shifted=True)

    def phi(self, n, alpha) -> Fraction:
        t = Fraction(alpha) + 1
        total = Fraction(0)
        for i in range(1, 2 * self.k):
            total += self.row_polynomial(i)(t) * Fraction(n) ** (2 * self.k - i)
        return total

    def negative_entries(self) -> list[tuple[int, int]]:
        return [(i + 1, j) for i, r in enumerate(self.rows)
                for j, x in enumerate(r) if x < 0]

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, k: int, data) -> "CoeffMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in data)
        return cls(k, len(rows[0]) - 1, rows)


@dataclass(frozen=True)
class Numerator:
    """``phi`` at a fixed sigma, scaled to a primitive integer matrix.

    ``f = scale * (Phi(M) + n^0 row) / psi`` with ``scale > 0``.
    """

    M: CoeffMatrix
    psi: AlphaPolynomial
    scale: Fraction
    constant_row: AlphaPolynomial   # n^0 coefficient, polynomial in t
    f: NPolynomial


def extract_M(k: int, side: str, c: AlphaFunction, sigma) -> Numerator:
    _check_k_side(k, side)
    sigma = Fraction(sigma)
    f = f_at_sigma(k, side, c, sigma)
    if f.degree >= 2 * k:
        raise CertificationError(f"f has degree {f.degree} in n; c does not cancel n^{2 * k}")
    psi = _lcm_denominator([f])
    psi_t = shift_to_alpha_plus_one(psi)
    if psi.lc <= 0 or count_positive_roots(psi_t):
        raise CertificationError(f"psi = {psi} is not positive for alpha > -1")
    rows = _t_rows(f, psi)
    d = max((p.degree for p in rows.values()), default=0)
    coeff_lists = {e: [p.coeff(d - j) for j in range(d + 1)] for e, p in rows.items()}
    den = 1
    for cl in coeff_lists.values():
        for x in cl:
            den = den * x.denominator // math.gcd(den, x.denominator)
    g = 0
    for cl in coeff_lists.values():
        for x in cl:
            g = math.gcd(g, int(x * den))
    scale = Fraction(g, den)           # phi_rational = scale * integer matrix
    ints = {e: [int(x / scale) for x in cl] for e, cl in coeff_lists.items()}
    matrix = tuple(tuple(ints.get(2 * k - i, [0] * (d + 1)))
                   for i in range(1, 2 * k))
    constant = AlphaPolynomial(reversed(ints.get(0, [])), shifted=True)
    return Numerator(CoeffMatrix(k, d, matrix), psi, scale, constant, f)


# ---------------------------------------------------------------------------
# Lambda reduction
# ---------------------------------------------------------------------------


def lambda_reduce(M: CoeffMatrix, base: int):
    """Return ``(Lambda, residuals)``; residuals are 1-based ``(i, j)`` pairs.

    Rows are scanned bottom-up. A negative entry ``lam[i][j]`` is paired with
    the nearest row ``h < i`` holding a positive entry in column ``j`` and
    ``delta = lam[i][j] / base^(i-h)``. If the positive entry absorbs
    ``delta`` it is lowered by ``floor(delta)`` and the negative entry is
    cleared; otherwise the positive entry is folded down into row ``i`` and
    the search continues upward. Entries left negative with no positive
    entry above are reported.
    """
    if base < 2:
        raise ValueError(f"base must be at least 2, got {base}")
    lam = [list(r) for r in M.rows]
    nrows = len(lam)
    residuals = []
    for i in range(nrows, 0, -1):
        for j in range(M.d + 1):
            while lam[i - 1][j] < 0:
                h = next((eta for eta in range(i - 1, 0, -1)
                          if lam[eta - 1][j] > 0), None)
                if h is None:
                    residuals.append((i, j))
                    break
                power = base ** (i - h)
                delta = Fraction(lam[i - 1][j], power)
                if lam[h - 1][j] + delta >= 0:
                    lam[h - 1][j] += math.floor(delta)
                    lam[i - 1][j] = 0
                else:
                    lam[i - 1][j] = lam[h - 1][j] * power + lam[i - 1][j]
                    lam[h - 1][j] = 0
    return CoeffMatrix(M.k, M.d, tuple(tuple(r) for r in lam)), residuals


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass
class BoundCertificate:
    k: int
    side: str
    c: AlphaFunction
    sigma: Fraction
    base: int
    M: Optional[CoeffMatrix]
    Lambda: Optional[CoeffMatrix]
    psi: Optional[AlphaPolynomial] = None
    residual_rows: list = field(default_factory=list)
    boundary_checks: list = field(default_factory=list)
    constant_row: Optional[tuple] = None
    candidates: tuple = ()
    sigma_overridden: bool = False
    sigma_promoted: bool = False
    status: str = "failed"
    failures: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def f_value(self, n: int, alpha) -> Fraction:
        """``f(n, alpha)`` recomputed from the recurrence, without ``M``."""
        return f_numeric(self.k, self.side, self.c, self.sigma, n, alpha)

    def to_json(self) -> dict:
        d = self.M.d if self.M is not None else None
        return {
            "k": self.k,
            "side": self.side,
            "c": self.c.to_json(),
            "sigma": format_rational(self.sigma),
            "base": self.base,
            "d": d,
            "M": self.M.to_json() if self.M is not None else None,
            "Lambda": self.Lambda.to_json() if self.Lambda is not None else None,
            "residual_rows": [
                {"row": i, "polynomial_t": p.to_json(), "verdict": v.value}
                for i, p, v in self.residual_rows],
            "boundary_checks": [
                {"n": n, "polynomial_t": p.to_json(), "verdict": v.value}
                for n, p, v in self.boundary_checks],
            "constant_row": None if self.constant_row is None else {
                "polynomial_t": self.constant_row[0].to_json(),
                "verdict": self.constant_row[1].value},
            "psi": self.psi.to_json() if self.psi is not None else None,
            "sigma_overridden": self.sigma_overridden,
            "sigma_promoted": self.sigma_promoted,
            "candidates": [cd.to_json() for cd in self.candidates],
            "failures": list(self.failures),
            "status": self.status,
        }

    @classmethod
    def from_json(cls, data: dict) -> "BoundCertificate":
        k = int(data["k"])
        cert = cls(
            k=k, side=data["side"], c=AlphaFunction.from_json(data["c"]),
            sigma=parse_rational(data["sigma"]), base=int(data["base"]),
            M=CoeffMatrix.from_json(k, data["M"]) if data.get("M") else None,
            Lambda=(CoeffMatrix.from_json(k, data["Lambda"])
                    if data.get("Lambda") else None),
            psi=(AlphaPolynomial.from_json(data["psi"]) if data.get("psi")
                 else None),
            sigma_overridden=data.get("sigma_overridden", False),
            sigma_promoted=data.get("sigma_promoted", False),
            candidates=tuple(Candidate.from_json(cd)
                             for cd in data.get("candidates", [])),
            status=data["status"], failures=list(data.get("failures", [])))
        cert.residual_rows = [
            (r["row"], AlphaPolynomial.from_json(r["polynomial_t"], True),
             Positivity(r["verdict"])) for r in data.get("residual_rows", [])]
        cert.boundary_checks = [
            (r["n"], AlphaPolynomial.from_json(r["polynomial_t"], True),
             Positivity(r["verdict"])) for r in data.get("boundary_checks", [])]
        if data.get("constant_row"):
            cr = data["constant_row"]
            cert.constant_row = (AlphaPolynomial.from_json(cr["polynomial_t"], True),
                                 Positivity(cr["verdict"]))
        return cert


def f_numeric(k: int, side: str, c: AlphaFunction, sigma, n: int, alpha) -> Fraction:
    """Exact ``f(n, alpha)`` from the coefficient recurrence at fixed (n, alpha)."""
    alpha = Fraction(alpha)
    b = coeffs_numeric(k, n, alpha).entries
    p = power_sums(b, k, p0=Fraction(n))
    cv = c(alpha)
    t = alpha + 1
    if side == "lower":
        return p[k] - cv * n * (n + Fraction(sigma) * t) * p[k - 1]
    return cv * (n + 1) ** k * (n + Fraction(sigma) * t) ** k - p[k]


def _ok(v: Positivity) -> bool:
    return v is Positivity.PROVEN_NONNEGATIVE or v is Positivity.ZERO_POLYNOMIAL


def certify(k: int, side: str, sigma=None, base: Optional[int] = None) -> BoundCertificate:
    """Run sigma search, matrix extraction, reduction and residual proofs."""
    _check_k_side(k, side)
    choice = sigma_search(k, side)
    sig = choice.sigma if sigma is None else parse_rational(sigma)
    base = default_base(k, side) if base is None else int(base)
    cert = BoundCertificate(k=k, side=side, c=choice.c, sigma=sig, base=base,
                            M=None, Lambda=None, candidates=choice.candidates,
                            sigma_overridden=sigma is not None,
                            sigma_promoted=choice.promoted and sigma is None)
    try:
        num = extract_M(k, side, choice.c, sig)
    except CertificationError as exc:
        cert.failures.append(f"extract_M: {exc}")
        return cert
    cert.M = num.M
    cert.psi = num.psi

    if not num.constant_row.is_zero():
        verdict = positive_axis_nonnegative(num.constant_row)
        cert.constant_row = (num.constant_row, verdict)
        if not _ok(verdict):
            cert.failures.append(f"n^0 row {num.constant_row} fails: {verdict.value}")

    lam, residuals = lambda_reduce(num.M, base)
    cert.Lambda = lam
    for i in sorted({i for i, _ in residuals}):
        poly = lam.row_polynomial(i)
        verdict = positive_axis_nonnegative(poly)
        cert.residual_rows.append((i, poly, verdict))
        if not _ok(verdict):
            cert.failures.append(
                f"residual row {i} (n^{2 * k - i}) fails: {verdict.value}")

    # n values below the reduction base are checked one by one in t
    for n in range(k, base):
        poly = _t_rows(NPolynomial([num.f.at_n(n)]), num.psi).get(
            0, AlphaPolynomial((), shifted=True)) * (1 / num.scale)
        verdict = positive_axis_nonnegative(poly)
        cert.boundary_checks.append((n, poly, verdict))
        if not _ok(verdict):
            cert.failures.append(f"boundary n={n} fails: {verdict.value}")

    cert.status = "failed" if cert.failures else "certified"
    return cert


@dataclass
class VerificationReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_certificate(cert: BoundCertificate, grid) -> VerificationReport:
    """Re-evaluate a certificate at ``(n, alpha)`` points exactly.

    Checks ``f >= 0`` (recomputed from the recurrence, independent of the
    matrices) for ``n >= k``, and ``0 <= Phi(Lambda) <= Phi(M)`` for
    ``n >= base``.
    """
    report = VerificationReport()
    if not cert.certified:
        raise ValueError("certificate is not certified")
    for n, alpha in grid:
        alpha = parse_rational(alpha) if isinstance(alpha, str) else Fraction(alpha)
        if n < cert.k or alpha <= -1:
            continue
        report.checked += 1
        f = cert.f_value(n, alpha)
        if f < 0:
            report.violations.append((n, alpha, "f < 0", f))
        if n >= cert.base:
            pl = cert.Lambda.phi(n, alpha)
            pm = cert.M.phi(n, alpha)
            if pl > pm:
                report.violations.append((n, alpha, "Phi(Lambda) > Phi(M)", pl - pm))
            if pl < 0:
                # residual rows are nonnegative in t but Phi(Lambda) >= 0 must hold
                report.violations.append((n, alpha, "Phi(Lambda) < 0", pl))
    return report
