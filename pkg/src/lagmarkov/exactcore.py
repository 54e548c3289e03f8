"""Exact rational polynomial arithmetic in the parameter alpha and the degree n.

Three value types live here:

``AlphaPolynomial``
    dense univariate polynomial with ``Fraction`` coefficients, either in
    ``alpha`` or in the shifted variable ``t = alpha + 1``.
``AlphaFunction``
    rational function of ``alpha`` kept in lowest terms.
``NPolynomial``
    polynomial in ``n`` whose coefficients are ``AlphaFunction`` values.

Scalars are ``fractions.Fraction``. Nothing in this module touches floating
point.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]

__all__ = [
    "AlphaFunction",
    "AlphaPolynomial",
    "NPolynomial",
    "Positivity",
    "count_positive_roots",
    "format_rational",
    "interpolate_in_n",
    "parse_rational",
    "positive_axis_nonnegative",
    "shift_from_alpha_plus_one",
    "shift_to_alpha_plus_one",
    "sturm_sequence",
]


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"``, an integer or a finite decimal string exactly."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(x: Scalar) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# integer polynomial kernels (lists of int, lowest power first)
# ---------------------------------------------------------------------------


def _strip(a: list[int]) -> list[int]:
    while a and not a[-1]:
        a.pop()
    return a


def _content(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(a: list[int]) -> list[int]:
    """Primitive part with positive leading coefficient."""
    if not a:
        return a
    g = _content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return a
    return [x // g for x in a]


def _ipoly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _strip(out)


def _ipoly_scale(a: Sequence[int], c: int) -> list[int]:
    if not c:
        return []
    return [x * c for x in a]


def _ipoly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ipoly_prem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= lr * y
        _strip(r)
    return r


def _ipoly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd (positive leading coefficient) by the primitive PRS."""
    a = _primitive(list(a))
    b = _primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    if len(b) == 1:
        return [1]
    while b:
        r = _ipoly_prem(a, b)
        a, b = b, _primitive(r)
        if len(b) == 1:
            return [1]
    return a


def _ipoly_exquo(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact quotient a/b in Z[x]; b must divide a and b primitive (Gauss)."""
    if len(b) == 1:
        c = b[0]
        out = []
        for x in a:
            q, r = divmod(x, c)
            if r:
                raise ArithmeticError("inexact integer polynomial division")
            out.append(q)
        return out
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    q = [0] * max(len(a) - db, 0)
    while r and len(r) - 1 >= db:
        lr, rem = divmod(r[-1], lb)
        if rem:
            raise ArithmeticError("inexact integer polynomial division")
        shift = len(r) - 1 - db
        q[shift] = lr
        for i, y in enumerate(b):
            r[i + shift] -= lr * y
        _strip(r)
    if r:
        raise ArithmeticError("inexact integer polynomial division")
    return q


def _fractions_to_int(coeffs: Sequence[Fraction]) -> tuple[Fraction, list[int]]:
    """Write a rational coefficient list as ``scale * integer list``."""
    if not coeffs:
        return Fraction(0), []
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = _content(ints)
    return Fraction(g, den), [x // g for x in ints]


# ---------------------------------------------------------------------------
# AlphaPolynomial
# ---------------------------------------------------------------------------


class AlphaPolynomial:
    """Polynomial in ``alpha`` (or in ``t = alpha + 1`` when ``shifted``).

    ``coeffs[i]`` is the coefficient of the i-th power. Trailing zeros are
    removed, so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "shifted")

    def __init__(self, coeffs: Iterable[Scalar] = (), shifted: bool = False):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.shifted = bool(shifted)

    @classmethod
    def variable(cls, shifted: bool = False) -> "AlphaPolynomial":
        return cls((0, 1), shifted)

    @classmethod
    def constant(cls, c: Scalar, shifted: bool = False) -> "AlphaPolynomial":
        return cls((c,), shifted)

    @property
    def basis(self) -> str:
        return "alpha_plus_one" if self.shifted else "alpha"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def _check(self, other: "AlphaPolynomial") -> None:
        if self.shifted != other.shifted:
            raise ValueError(
                f"basis mismatch: {self.basis} vs {other.basis}")

    def _coerce(self, other) -> "AlphaPolynomial":
        if isinstance(other, AlphaPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return AlphaPolynomial((other,), self.shifted)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return AlphaPolynomial(out, self.shifted)

    __radd__ = __add__

    def __neg__(self):
        return AlphaPolynomial([-c for c in self.coeffs], self.shifted)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return AlphaPolynomial((), self.shifted)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return AlphaPolynomial(out, self.shifted)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = AlphaPolynomial((1,), self.shifted)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlphaPolynomial((other,), self.shifted)
        if not isinstance(other, AlphaPolynomial):
            return NotImplemented
        return self.shifted == other.shifted and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.shifted))

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Scalar) -> int:
        v = self(x)
        return (v > 0) - (v < 0)

    def derivative(self) -> "AlphaPolynomial":
        return AlphaPolynomial(
            [i * c for i, c in enumerate(self.coeffs)][1:], self.shifted)

    def divmod(self, other: "AlphaPolynomial"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lb = other.lc
        q = [Fraction(0)] * max(len(r) - db, 1)
        while r and len(r) - 1 >= db:
            f = r[-1] / lb
            shift = len(r) - 1 - db
            q[shift] = f
            for i, y in enumerate(other.coeffs):
                r[i + shift] -= f * y
            r.pop()
            while r and not r[-1]:
                r.pop()
        return (AlphaPolynomial(q, self.shifted),
                AlphaPolynomial(r, self.shifted))

    def monic(self) -> "AlphaPolynomial":
        if self.is_zero():
            return self
        lc = self.lc
        return AlphaPolynomial([c / lc for c in self.coeffs], self.shifted)

    def integer_form(self) -> tuple[Fraction, list[int]]:
        """``(scale, ints)`` with ``self == scale * ints``, ints primitive."""
        return _fractions_to_int(self.coeffs)

    def gcd(self, other: "AlphaPolynomial") -> "AlphaPolynomial":
        """Monic gcd (zero only if both operands are zero)."""
        self._check(other)
        _, a = self.integer_form()
        _, b = other.integer_form()
        g = _ipoly_gcd(a, b)
        return AlphaPolynomial(g, self.shifted).monic()

    def sqf_part(self) -> "AlphaPolynomial":
        if self.degree < 1:
            return self.monic()
        g = self.gcd(self.derivative())
        return self.divmod(g)[0].monic()

    def sqf_list(self) -> list[tuple["AlphaPolynomial", int]]:
        """Yun's square-free decomposition ``[(factor, multiplicity), ...]``.

        Factors are monic; the leading coefficient of ``self`` is dropped.
        """
        if self.degree < 1:
            return []
        f = self.monic()
        out = []
        df = f.derivative()
        a = f.gcd(df)
        b = f.divmod(a)[0]
        c = df.divmod(a)[0]
        d = c - b.derivative()
        i = 1
        while b.degree >= 1:
            a = b.gcd(d)
            if a.degree >= 1:
                out.append((a, i))
            b = b.divmod(a)[0]
            c = d.divmod(a)[0]
            d = c - b.derivative()
            i += 1
        return out

    def taylor_shift(self, h: Scalar) -> "AlphaPolynomial":
        """Coefficients of ``x -> p(x + h)`` (same basis flag)."""
        c = list(self.coeffs)
        n = len(c)
        h = Fraction(h)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += h * c[j + 1]
        return AlphaPolynomial(c, self.shifted)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str], shifted: bool = False):
        return cls([parse_rational(x) for x in data], shifted)

    def __repr__(self):
        var = "t" if self.shifted else "alpha"
        if not self.coeffs:
            return "AlphaPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{format_rational(c)}*{var}^{i}" if i else
                             format_rational(c))
        return "AlphaPolynomial(" + " + ".join(terms) + ")"


def shift_to_alpha_plus_one(p: AlphaPolynomial) -> AlphaPolynomial:
    """Rewrite ``p(alpha)`` in powers of ``t = alpha + 1``: q(t) = p(t - 1)."""
    if p.shifted:
        raise ValueError("polynomial is already in the alpha_plus_one basis")
    q = p.taylor_shift(-1)
    return AlphaPolynomial(q.coeffs, shifted=True)


def shift_from_alpha_plus_one(q: AlphaPolynomial) -> AlphaPolynomial:
    if not q.shifted:
        raise ValueError("polynomial is not in the alpha_plus_one basis")
    p = q.taylor_shift(1)
    return AlphaPolynomial(p.coeffs, shifted=False)


# ---------------------------------------------------------------------------
# Sturm sequences and positivity on (0, inf)
# ---------------------------------------------------------------------------


def sturm_sequence(p: AlphaPolynomial) -> list[AlphaPolynomial]:
    """Sturm chain of the square-free part of ``p``."""
    f = p.sqf_part()
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-seq[-2].divmod(seq[-1])[1])
    return seq[:-1]


def _sign_changes(signs: Iterable[int]) -> int:
    last = 0
    count = 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def count_positive_roots(p: AlphaPolynomial) -> int:
    """Number of distinct roots of ``p`` in the open interval (0, inf)."""
    if p.degree < 1:
        return 0
    # roots at 0 are outside the interval; divide them out first
    k = 0
    while p.coeffs[k] == 0:
        k += 1
    f = AlphaPolynomial(p.coeffs[k:], p.shifted)
    if f.degree < 1:
        return 0
    seq = sturm_sequence(f)
    at_zero = _sign_changes((q.coeff(0) > 0) - (q.coeff(0) < 0) for q in seq)
    at_inf = _sign_changes((q.lc > 0) - (q.lc < 0) for q in seq)
    return at_zero - at_inf


class Positivity(str, enum.Enum):
    PROVEN_NONNEGATIVE = "proven_nonnegative"
    HAS_POSITIVE_ROOT = "has_positive_root"
    ZERO_POLYNOMIAL = "zero_polynomial"
    NEGATIVE = "negative"


def positive_axis_nonnegative(p: AlphaPolynomial) -> Positivity:
    """Decide exactly whether ``p(t) >= 0`` for every ``t > 0``.

    The sign of ``p`` can only change at a positive root of odd
    multiplicity, so the square-free factors of odd multiplicity are
    Sturm-counted on (0, inf). Without such roots the sign on the whole
    half-line is the sign at infinity.

    ``NEGATIVE`` means ``p < 0`` on all of (0, inf) except possibly at
    roots of even multiplicity with no sign change.
    """
    if p.is_zero():
        return Positivity.ZERO_POLYNOMIAL
    if p.degree == 0:
        return (Positivity.PROVEN_NONNEGATIVE if p.lc > 0
                else Positivity.NEGATIVE)
    crossing = any(count_positive_roots(f) for f, m in p.sqf_list() if m % 2)
    if crossing:
        return Positivity.HAS_POSITIVE_ROOT
    if p.lc > 0:
        return Positivity.PROVEN_NONNEGATIVE
    return (Positivity.HAS_POSITIVE_ROOT if count_positive_roots(p)
            else Positivity.NEGATIVE)


# ---------------------------------------------------------------------------
# AlphaFunction
# ---------------------------------------------------------------------------


class AlphaFunction:
    """Rational function ``num(alpha)/den(alpha)`` in lowest terms.

    Stored as a pair of integer coefficient lists with polynomial gcd 1,
    coprime integer contents and a positive leading denominator
    coefficient, which makes the representation canonical. ``num`` and
    ``den`` expose the monic-denominator form as ``AlphaPolynomial``.
    """

    __slots__ = ("_n", "_d")

    def __init__(self, num=0, den=1):
        n = _as_int_scaled(num)
        d = _as_int_scaled(den)
        self._n, self._d = _normalize(n[0], n[1], d[0], d[1])

    @classmethod
    def _raw(cls, n: list[int], d: list[int]) -> "AlphaFunction":
        obj = object.__new__(cls)
        obj._n = tuple(n)
        obj._d = tuple(d)
        return obj

    @classmethod
    def variable(cls) -> "AlphaFunction":
        return cls._raw([0, 1], [1])

    @classmethod
    def constant(cls, c: Scalar) -> "AlphaFunction":
        c = Fraction(c)
        if not c:
            return cls._raw([], [1])
        return cls._raw([c.numerator], [c.denominator])

    @property
    def num(self) -> AlphaPolynomial:
        lc = self._d[-1]
        return AlphaPolynomial([Fraction(x, lc) for x in self._n])

    @property
    def den(self) -> AlphaPolynomial:
        lc = self._d[-1]
        return AlphaPolynomial([Fraction(x, lc) for x in self._d])

    def integer_parts(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self._n, self._d

    def is_zero(self) -> bool:
        return not self._n

    def is_constant(self) -> bool:
        return len(self._n) <= 1 and len(self._d) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return Fraction(self._n[0], self._d[0]) if self._n else Fraction(0)

    def _coerce(self, other) -> "AlphaFunction":
        if isinstance(other, AlphaFunction):
            return other
        if isinstance(other, (int, Fraction)):
            return AlphaFunction.constant(other)
        if isinstance(other, AlphaPolynomial):
            if other.shifted:
                raise ValueError("basis mismatch: expected alpha basis")
            return AlphaFunction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._n:
            return self
        if not self._n:
            return other
        n1, d1, n2, d2 = self._n, self._d, other._n, other._d
        if d1 == d2:
            n = _ipoly_add(n1, n2)
            d = list(d1)
        else:
            g = _ipoly_gcd(list(d1), list(d2))
            if len(g) == 1:
                n = _ipoly_add(_ipoly_mul(n1, d2), _ipoly_mul(n2, d1))
                d = _ipoly_mul(d1, d2)
            else:
                d1g = _ipoly_exquo(d1, g)
                d2g = _ipoly_exquo(d2, g)
                n = _ipoly_add(_ipoly_mul(n1, d2g), _ipoly_mul(n2, d1g))
                d = _ipoly_mul(d1, d2g)
        if not n:
            return AlphaFunction._raw([], [1])
        h = _ipoly_gcd(n, d)
        if len(h) > 1:
            n = _ipoly_exquo(n, h)
            d = _ipoly_exquo(d, h)
        return AlphaFunction._raw(*_normalize_content(n, d))

    __radd__ = __add__

    def __neg__(self):
        return AlphaFunction._raw([-x for x in self._n], self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._n or not other._n:
            return AlphaFunction._raw([], [1])
        n1, d1, n2, d2 = list(self._n), list(self._d), list(other._n), list(other._d)
        if len(d2) > 1 and len(n1) > 1:
            g = _ipoly_gcd(n1, d2)
            if len(g) > 1:
                n1 = _ipoly_exquo(n1, g)
                d2 = _ipoly_exquo(d2, g)
        if len(d1) > 1 and len(n2) > 1:
            g = _ipoly_gcd(n2, d1)
            if len(g) > 1:
                n2 = _ipoly_exquo(n2, g)
                d1 = _ipoly_exquo(d1, g)
        return AlphaFunction._raw(
            *_normalize_content(_ipoly_mul(n1, n2), _ipoly_mul(d1, d2)))

    __rmul__ = __mul__

    def inverse(self) -> "AlphaFunction":
        if not self._n:
            raise ZeroDivisionError("AlphaFunction division by zero")
        return AlphaFunction._raw(*_normalize_content(list(self._d), list(self._n)))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = AlphaFunction.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlphaPolynomial)):
            other = self._coerce(other)
        if not isinstance(other, AlphaFunction):
            return NotImplemented
        return self._n == other._n and self._d == other._d

    def __hash__(self):
        return hash((self._n, self._d))

    def __call__(self, alpha: Scalar) -> Fraction:
        alpha = Fraction(alpha)
        d = _ieval(self._d, alpha)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at alpha={alpha}")
        return _ieval(self._n, alpha) / d

    def den_positive_on_domain(self) -> bool:
        """True iff the denominator has no zero for alpha > -1."""
        t_den = shift_to_alpha_plus_one(AlphaPolynomial(self._d))
        return count_positive_roots(t_den) == 0

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "AlphaFunction":
        return cls(AlphaPolynomial.from_json(data["num"]),
                   AlphaPolynomial.from_json(data["den"]))

    def __repr__(self):
        return f"AlphaFunction({list(self._n)} / {list(self._d)})"


def _ieval(coeffs: Sequence[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _as_int_scaled(p) -> tuple[Fraction, list[int]]:
    if isinstance(p, AlphaPolynomial):
        if p.shifted:
            raise ValueError("basis mismatch: expected alpha basis")
        return p.integer_form()
    if isinstance(p, (int, Fraction)):
        p = Fraction(p)
        if not p:
            return Fraction(0), []
        return p, [1]
    return _fractions_to_int([Fraction(c) for c in p])


def _normalize(ns: Fraction, n: list[int], ds: Fraction, d: list[int]):
    if not d:
        raise ZeroDivisionError("zero denominator")
    if not n:
        return (), (1,)
    g = _ipoly_gcd(n, d)
    if len(g) > 1:
        n = _ipoly_exquo(n, g)
        d = _ipoly_exquo(d, g)
    scale = ns / ds
    n = _ipoly_scale(n, scale.numerator)
    d = _ipoly_scale(d, scale.denominator)
    n, d = _normalize_content(n, d)
    return tuple(n), tuple(d)


def _normalize_content(n: list[int], d: list[int]):
    g = math.gcd(_content(n), _content(d))
    if d[-1] < 0:
        g = -g
    if g != 1:
        n = [x // g for x in n]
        d = [x // g for x in d]
    return n, d


# ---------------------------------------------------------------------------
# NPolynomial
# ---------------------------------------------------------------------------


class NPolynomial:
    """Polynomial in ``n`` with ``AlphaFunction`` coefficients (lowest first)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, AlphaFunction) else AlphaFunction.constant(c)
              for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[AlphaFunction, ...] = tuple(cs)

    @classmethod
    def n(cls) -> "NPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> AlphaFunction:
        return self.coeffs[-1] if self.coeffs else AlphaFunction.constant(0)

    def coeff(self, i: int) -> AlphaFunction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return AlphaFunction.constant(0)

    def _coerce(self, other) -> "NPolynomial":
        if isinstance(other, NPolynomial):
            return other
        if isinstance(other, (int, Fraction, AlphaFunction)):
            return NPolynomial((other,))
        if isinstance(other, AlphaPolynomial):
            return NPolynomial((AlphaFunction(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return NPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return NPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlphaFunction)):
            return NPolynomial([c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return NPolynomial()
        out = [AlphaFunction.constant(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return NPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = NPolynomial((1,))
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def at_n(self, n: Scalar) -> AlphaFunction:
        acc = AlphaFunction.constant(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __call__(self, n: Scalar, alpha: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c(alpha)
        return acc

    def common_denominator(self) -> AlphaPolynomial:
        """Monic lcm of the coefficient denominators."""
        den = [1]
        for c in self.coeffs:
            d = list(c.integer_parts()[1])
            g = _ipoly_gcd(den, d)
            den = _ipoly_mul(den, _ipoly_exquo(d, g))
        return AlphaPolynomial(den).monic()

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.coeffs]

    def __repr__(self):
        return f"NPolynomial(degree={self.degree})"


def interpolate_in_n(samples: Sequence[tuple[Scalar, AlphaFunction]],
                     degree_bound: int) -> NPolynomial:
    """Interpolating polynomial in ``n`` of degree at most ``degree_bound``.

    The first ``degree_bound + 1`` samples determine the result; any further
    samples must lie on it or ``ValueError`` is raised.
    """
    m = degree_bound + 1
    if len(samples) < m:
        raise ValueError(
            f"need at least {m} samples for degree {degree_bound}, "
            f"got {len(samples)}")
    xs = [Fraction(x) for x, _ in samples[:m]]
    if len(set(xs)) != m:
        raise ValueError("interpolation nodes must be distinct")
    values = [v if isinstance(v, AlphaFunction) else AlphaFunction.constant(v)
              for _, v in samples]

    # common denominator so that the linear algebra runs on integer polys
    den = [1]
    for v in values[:m]:
        d = list(v.integer_parts()[1])
        g = _ipoly_gcd(den, d)
        den = _ipoly_mul(den, _ipoly_exquo(d, g))
    nums = []
    for v in values[:m]:
        vn, vd = v.integer_parts()
        nums.append(_ipoly_mul(vn, _ipoly_exquo(den, vd)))

    # Lagrange basis polynomials in n with rational coefficients
    result: list[list[Fraction]] = [[] for _ in range(m)]  # per power of n
    for j in range(m):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for i in range(m):
            if i == j:
                continue
            basis = _frac_poly_mul_linear(basis, -xs[i])
            denom *= xs[j] - xs[i]
        for p in range(m):
            w = basis[p] / denom if p < len(basis) else Fraction(0)
            if w:
                result[p] = _frac_poly_axpy(result[p], w, nums[j])
    den_poly = AlphaPolynomial(den)
    coeffs = [AlphaFunction(AlphaPolynomial(r), den_poly) if r else
              AlphaFunction.constant(0) for r in result]
    poly = NPolynomial(coeffs)
    for x, v in zip((x for x, _ in samples[m:]), values[m:]):
        if poly.at_n(x) != v:
            raise ValueError(f"sample at n={x} does not lie on the interpolant")
    return poly


def _frac_poly_mul_linear(p: list[Fraction], c: Fraction) -> list[Fraction]:
    """p(x) * (x + c)."""
    out = [Fraction(0)] * (len(p) + 1)
    for i, x in enumerate(p):
        out[i] += c * x
        out[i + 1] += x
    return out


def _frac_poly_axpy(acc: list, w: Fraction, p: Sequence[int]) -> list:
    if len(acc) < len(p):
        acc = acc + [Fraction(0)] * (len(p) - len(acc))
    for i, x in enumerate(p):
        acc[i] += w * x
    return acc
