"""Formal local L-factors as products of ``(1 - c t^k)^(-1)``, ``t = q^(-s)``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .algebra import (
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    expand_factor_product,
    format_scalar,
    q_power,
)
from .errors import PoleAtEvaluationPoint, PoleAtSpecialPoint, SchemaError
from .reps import QuadraticExtensionSpec, SatakeParams


@dataclass(frozen=True)
class LFactor:
    """Inverse of ``prod (1 - c t^k)`` over the stored ``(c, k)`` pairs.

    The factor list is sorted by ``(k, c)``, which makes it canonical: two
    LFactors are equal exactly when their factor multisets agree.
    """

    factors: tuple

    def __init__(self, factors: Iterable = ()):
        fs = []
        for c, k in factors:
            c = Fraction(c)
            if k not in (1, 2):
                raise ValueError(f"t-power must be 1 or 2, got {k!r}")
            if c != 0:
                fs.append((c, k))
        fs.sort(key=lambda f: (f[1], f[0]))
        object.__setattr__(self, "factors", tuple(fs))

    def __mul__(self, other: "LFactor") -> "LFactor":
        return LFactor(self.factors + other.factors)

    @property
    def denominator(self) -> Polynomial:
        p = Polynomial.one()
        for c, k in self.factors:
            p = p * Polynomial([1] + [0] * (k - 1) + [-c])
        return p

    @property
    def degree(self) -> int:
        """Degree of the denominator in ``t``."""
        return sum(k for _, k in self.factors)

    def as_ratfun(self) -> RationalFunction:
        return RationalFunction(Polynomial.one(), self.denominator)

    def series(self, order: int) -> TruncatedSeries:
        return expand_factor_product(self.factors, order)

    def pole_factor(self, t0):
        """The first factor vanishing at ``t0``, or None."""
        for c, k in self.factors:
            if c * t0 ** k == 1:
                return (c, k)
        return None

    def evaluate(self, t0, special: bool = False):
        bad = self.pole_factor(t0)
        if bad is not None:
            msg = f"factor {_format_factor(*bad)} vanishes at t = {format_scalar(t0)}"
            if special:
                raise PoleAtSpecialPoint(msg, factor=_format_factor(*bad))
            raise PoleAtEvaluationPoint(msg)
        den = 1
        for c, k in self.factors:
            den = den * (1 - c * t0 ** k)
        return 1 / Fraction(den) if isinstance(den, (int, Fraction)) else 1 / den

    def __str__(self):
        if not self.factors:
            return "1"
        return "".join(_format_factor(c, k) for c, k in self.factors)

    def to_json(self) -> dict:
        return {"factors": [[str(c), k] for c, k in self.factors]}

    @classmethod
    def from_json(cls, obj) -> "LFactor":
        try:
            return cls((Fraction(c), int(k)) for c, k in obj["factors"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad L-factor description: {exc}", "factors") from None


def _format_factor(c: Fraction, k: int) -> str:
    var = "t" if k == 1 else f"t^{k}"
    sign = "-" if c > 0 else "+"
    mag = abs(c)
    body = var if mag == 1 else f"{mag} {var}"
    return f"(1 {sign} {body})"


def standard(params: SatakeParams) -> LFactor:
    return LFactor((a, 1) for a in params)


def rankin_selberg(pi: SatakeParams, sigma: SatakeParams) -> LFactor:
    return LFactor((a * b, 1) for a in pi for b in sigma)


def exterior_square(params: SatakeParams) -> LFactor:
    return LFactor((a * b, 1) for a, b in combinations(params.values, 2))


def symmetric_square_formal(params: SatakeParams) -> LFactor:
    vals = params.values
    return LFactor(
        (vals[i] * vals[j], 1) for i in range(len(vals)) for j in range(i, len(vals))
    )


def bump_friedberg(params: SatakeParams) -> LFactor:
    """``L(s, pi) L(2s, pi, wedge^2)``."""
    return LFactor(
        [(a, 1) for a in params]
        + [(a * b, 2) for a, b in combinations(params.values, 2)]
    )


def asai(params: SatakeParams, ext: QuadraticExtensionSpec) -> LFactor:
    """Formal Asai factor in ``u = q_F^(-s)``."""
    pairs = list(combinations(params.values, 2))
    if ext.kind == "unramified":
        return LFactor([(a, 1) for a in params] + [(a * b, 2) for a, b in pairs])
    return LFactor([(a * a, 1) for a in params] + [(a * b, 1) for a, b in pairs])


def tate_value(n, omega, q: int):
    """``(1 - omega q^(-n))^(-1)`` for ``n`` in (1/2)Z.

    Returns a Fraction when the result is rational, otherwise a QSqrt.
    """
    x = Fraction(omega) * q_power(q, -Fraction(n))
    if x == 1:
        raise PoleAtSpecialPoint(
            f"L({format_scalar(Fraction(n))}, omega) has a pole: omega q^-n = 1",
            factor=f"L({format_scalar(Fraction(n))}, omega)",
        )
    val = 1 / (1 - x)
    return val.a if val.is_rational() else val


KINDS = {
    "standard": standard,
    "rs": rankin_selberg,
    "asai": asai,
    "ext2": exterior_square,
    "sym2": symmetric_square_formal,
    "bf": bump_friedberg,
}
