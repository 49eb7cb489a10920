"""Exact arithmetic over Q(sqrt q): scalars, dense polynomials in t,
rational functions and truncated power series.

Scalars are duck-typed: ``int``, :class:`fractions.Fraction` and
:class:`QSqrt` mix freely, so purely rational computations never pay for the
quadratic extension.  All values are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import (
    NegativeOrder,
    OrderMismatch,
    PoleAtEvaluationPoint,
    ZeroConstantTerm,
)

__all__ = [
    "QSqrt",
    "Scalar",
    "Polynomial",
    "RationalFunction",
    "TruncatedSeries",
    "q_power",
    "sqrt_q",
    "is_rational",
    "to_fraction",
    "format_scalar",
    "parse_scalar",
    "scalar_to_json",
    "poly_mul",
    "series_invert",
    "expand_factor_product",
    "ratfun_eval",
    "series_eq",
]


class QSqrt:
    """The number ``a + b*sqrt(q)`` with rational ``a``, ``b``.

    When ``q`` is a perfect square the irrational part is folded into ``a``,
    so ``b != 0`` always means a genuinely irrational value.
    """

    __slots__ = ("a", "b", "q")

    def __init__(self, a=0, b=0, q: int = 1):
        if not isinstance(q, int) or q < 1:
            raise ValueError(f"q must be a positive integer, got {q!r}")
        a = Fraction(a)
        b = Fraction(b)
        if b:
            s = isqrt(q)
            if s * s == q:
                a += b * s
                b = Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QSqrt is immutable")

    def __reduce__(self):
        return (QSqrt, (self.a, self.b, self.q))

    # -- coercion -------------------------------------------------------
    def _parts(self, other):
        if isinstance(other, QSqrt):
            if self.b and other.b and self.q != other.q:
                raise ValueError(
                    f"cannot combine sqrt({self.q}) and sqrt({other.q}) values"
                )
            q = self.q if self.b else other.q
            return other.a, other.b, q
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return Fraction(other), Fraction(0), self.q
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, q = p
        return QSqrt(self.a + a, self.b + b, q)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.q)

    def __pos__(self):
        return self

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, q = p
        return QSqrt(self.a - a, self.b - b, q)

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, q = p
        return QSqrt(a - self.a, b - self.b, q)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, q = p
        if not b:
            return QSqrt(self.a * a, self.b * a, q)
        if not self.b:
            return QSqrt(self.a * a, self.a * b, q)
        return QSqrt(self.a * a + self.b * b * q, self.a * b + self.b * a, q)

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt":
        return QSqrt(self.a, -self.b, self.q)

    def norm(self) -> Fraction:
        """``a^2 - b^2 q``, the field norm down to Q."""
        return self.a * self.a - self.b * self.b * self.q

    def inverse(self) -> "QSqrt":
        if not self.b:
            if not self.a:
                raise ZeroDivisionError("QSqrt division by zero")
            return QSqrt(1 / self.a, 0, self.q)
        n = self.norm()
        return QSqrt(self.a / n, -self.b / n, self.q)

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, q = p
        if not b:
            if not a:
                raise ZeroDivisionError("QSqrt division by zero")
            return QSqrt(self.a / a, self.b / a, q)
        return self * QSqrt(a, b, q).inverse()

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b, q = p
        return QSqrt(a, b, q) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QSqrt(1, 0, self.q)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QSqrt):
            if self.b or other.b:
                return self.a == other.a and self.b == other.b and self.q == other.q
            return self.a == other.a
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.q))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __abs__(self):
        return self if float(self) >= 0 else -self

    def __float__(self):
        return float(self.a) + float(self.b) * self.q ** 0.5

    def __lt__(self, other):
        return float(self) < float(other)

    def is_rational(self) -> bool:
        return not self.b

    def __repr__(self):
        return f"QSqrt({self.a!s}, {self.b!s}, q={self.q})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, QSqrt]


def sqrt_q(q: int) -> QSqrt:
    return QSqrt(0, 1, q)


def q_power(q: int, exponent) -> QSqrt:
    """``q**exponent`` for ``exponent`` in (1/2)Z, exactly."""
    e2 = Fraction(exponent) * 2
    if e2.denominator != 1:
        raise ValueError(f"q-power exponent {exponent} is not a half-integer")
    e2 = e2.numerator
    if e2 % 2 == 0:
        return QSqrt(Fraction(q) ** (e2 // 2), 0, q)
    return QSqrt(0, Fraction(q) ** ((e2 - 1) // 2), q)


def is_rational(x) -> bool:
    return x.is_rational() if isinstance(x, QSqrt) else True


def to_fraction(x) -> Fraction:
    if isinstance(x, QSqrt):
        if x.b:
            raise ValueError(f"{x} is not rational")
        return x.a
    return Fraction(x)


def format_scalar(x) -> str:
    if isinstance(x, QSqrt):
        if not x.b:
            return str(x.a)
        irr = f"sqrt({x.q})" if x.b == 1 else f"{x.b}*sqrt({x.q})"
        if x.b == -1:
            irr = f"-sqrt({x.q})"
        if not x.a:
            return irr
        if irr.startswith("-"):
            return f"{x.a} - {irr[1:]}"
        return f"{x.a} + {irr}"
    return str(Fraction(x))


def scalar_to_json(x):
    """Rational values become ``"p/q"`` strings, irrational ones a dict."""
    if isinstance(x, QSqrt) and x.b:
        return {"a": str(x.a), "b": str(x.b), "q": x.q}
    return str(to_fraction(x))


def parse_scalar(obj) -> Scalar:
    if isinstance(obj, dict):
        return QSqrt(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["q"]))
    return Fraction(obj)


# ---------------------------------------------------------------------------
# polynomials


def _trim(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Polynomial:
    """Dense polynomial in ``t``; ``coeffs[k]`` multiplies ``t**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.coeffs,))

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def monomial(cls, c, k: int) -> "Polynomial":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return len(self.coeffs) == len(other.coeffs) and all(
                x == y for x, y in zip(self.coeffs, other.coeffs)
            )
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self), len(other))
        return Polynomial(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self), len(other))
        return Polynomial(self[k] - other[k] for k in range(n))

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def __rmul__(self, other):
        return Polynomial(other * c for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        dq = other.degree
        quot = [0] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            c = rem[k + dq] / lead if not isinstance(lead, int) else Fraction(rem[k + dq], lead)
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def monic(self) -> "Polynomial":
        lead = self.coeffs[-1]
        return Polynomial(c / lead if not isinstance(lead, int) else Fraction(c, lead)
                          for c in self.coeffs)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def __repr__(self):
        return f"Polynomial({[format_scalar(c) for c in self.coeffs]})"

    def __str__(self):
        return format_poly(self.coeffs)


def format_poly(coeffs: Sequence, var: str = "t") -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        s = format_scalar(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono:
            if s == "1":
                s = mono
            elif s == "-1":
                s = "-" + mono
            else:
                s = f"({s})*{mono}" if " " in s else f"{s}*{mono}"
        terms.append(s)
    if not terms:
        return "0"
    out = terms[0]
    for s in terms[1:]:
        out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
    return out


def poly_mul(p: Polynomial, r: Polynomial) -> Polynomial:
    return p * r


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """``numerator / denominator`` normalized so the denominator has constant
    term 1."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: Polynomial, denominator: Polynomial | None = None):
        if denominator is None:
            denominator = Polynomial.one()
        c0 = denominator[0]
        if c0 == 0:
            raise ZeroConstantTerm("denominator must have nonzero constant term")
        if c0 != 1:
            inv = 1 / c0 if not isinstance(c0, int) else Fraction(1, c0)
            numerator = numerator * inv
            denominator = denominator * inv
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "denominator", denominator)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    def __reduce__(self):
        return (RationalFunction, (self.numerator, self.denominator))

    def reduce(self) -> "RationalFunction":
        g = self.numerator.gcd(self.denominator)
        if g.is_zero() or g.degree == 0:
            return self
        num, r1 = self.numerator.divmod(g)
        den, r2 = self.denominator.divmod(g)
        assert r1.is_zero() and r2.is_zero()
        return RationalFunction(num, den)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        r = self.reduce()
        return hash((r.numerator, r.denominator))

    def __call__(self, t0):
        return ratfun_eval(self, t0)

    def series(self, order: int) -> "TruncatedSeries":
        inv = series_invert(self.denominator, order)
        return inv * TruncatedSeries.from_polynomial(self.numerator, order)

    def __repr__(self):
        return f"RationalFunction({self.numerator!r}, {self.denominator!r})"

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"


def ratfun_eval(f: RationalFunction, t0):
    den = f.denominator(t0)
    if den == 0:
        raise PoleAtEvaluationPoint(f"denominator vanishes at t = {format_scalar(t0)}")
    num = f.numerator(t0)
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


# ---------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """Power series in ``t`` known modulo ``t**(order+1)``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise NegativeOrder(f"order must be >= 0, got {order}")
        c = list(coeffs)[: order + 1]
        c.extend([0] * (order + 1 - len(c)))
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    def __reduce__(self):
        return (TruncatedSeries, (self.coeffs, self.order))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> "TruncatedSeries":
        return cls(p.coeffs, order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise OrderMismatch(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.coeffs, order)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries((self[k] + other[k] for k in range(n + 1)), n)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries((self[k] - other[k] for k in range(n + 1)), n)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries((c * other for c in self.coeffs), self.order)
        n = min(self.order, other.order)
        out = [0] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return TruncatedSeries(out, n)

    def __rmul__(self, other):
        return TruncatedSeries((other * c for c in self.coeffs), self.order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(
            x == y for x, y in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.coeffs, self.order))

    def first_mismatch(self, other: "TruncatedSeries") -> int | None:
        for k, (x, y) in enumerate(zip(self.coeffs, other.coeffs)):
            if x != y:
                return k
        return None

    def partial_sum(self, t0, terms: int | None = None):
        """``sum_{k<=terms} c_k t0^k`` evaluated exactly."""
        terms = self.order if terms is None else min(terms, self.order)
        acc = 0
        for c in reversed(self.coeffs[: terms + 1]):
            acc = acc * t0 + c
        return acc

    def __repr__(self):
        return f"TruncatedSeries({[format_scalar(c) for c in self.coeffs]}, order={self.order})"

    def __str__(self):
        return format_poly(self.coeffs) + f" + O(t^{self.order + 1})"


def series_invert(p: Polynomial, order: int) -> TruncatedSeries:
    if order < 0:
        raise NegativeOrder(f"order must be >= 0, got {order}")
    c0 = p[0]
    if c0 == 0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    inv0 = 1 / c0 if not isinstance(c0, int) else Fraction(1, c0)
    out = [inv0]
    pc = p.coeffs
    for k in range(1, order + 1):
        acc = 0
        for j in range(1, min(k, len(pc) - 1) + 1):
            if pc[j] != 0:
                acc += pc[j] * out[k - j]
        out.append(-acc * inv0)
    return TruncatedSeries(out, order)


def expand_factor_product(factors: Iterable[tuple], order: int) -> TruncatedSeries:
    """Expansion of ``prod (1 - c*t^k)^(-1)`` modulo ``t^(order+1)``."""
    if order < 0:
        raise NegativeOrder(f"order must be >= 0, got {order}")
    out = [1] + [0] * order
    for c, k in factors:
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"factor power must be a positive integer, got {k!r}")
        # multiply by the geometric series in c*t^k, in place
        for i in range(k, order + 1):
            if out[i - k] != 0:
                out[i] = out[i] + c * out[i - k]
    return TruncatedSeries(out, order)


def series_eq(a: TruncatedSeries, b: TruncatedSeries) -> bool:
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")
    return a == b
