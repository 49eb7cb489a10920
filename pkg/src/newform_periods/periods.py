"""Period integrals as lattice sums over torus cosets.

Each integral is reduced to a sum over dominant weights of products of
Whittaker values and modulus weights, graded by the power of ``t = q^(-s)``.
The integral over the mirabolic subgroup (the *period*) is the basic sum;
when the representation is unramified the test function is the full
characteristic function of the lattice, and the complete integral is the
period times a Tate series ``sum_k (omega t^n)^k`` coming from the centre.

Kinds: ``rs`` (Rankin-Selberg, two specs), ``asai``, ``jse`` / ``jso``
(Jacquet-Shalika, even / odd rank), ``bf`` (Bump-Friedberg at
``(s, 2s)``), ``bg`` (Bump-Ginzburg, even weights).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    QSqrt,
    TruncatedSeries,
    expand_factor_product,
    format_scalar,
    q_power,
)
from .errors import (
    ConvergenceViolation,
    EvenRank,
    FieldMismatch,
    InvariantViolation,
    NegativeOrder,
    NotDominant,
    OddRank,
    RankMismatch,
)
from .lfactors import (
    LFactor,
    asai,
    bump_friedberg,
    exterior_square,
    rankin_selberg,
    symmetric_square_formal,
    tate_value,
)
from .partitions import double_columns, enumerate_dominant, interleave, pad
from .reps import QuadraticExtensionSpec, RepresentationSpec, central_char_restricted_to_F
from .schur import SchurEvaluator
from .whittaker import essential_value, modulus_exponent, spherical_value

DEFAULT_ORDER = 12
KINDS = ("rs", "asai", "jse", "jso", "bf", "bg")
MAX_CROSS_CHECK_TERMS = 300
CROSS_CHECK_TOL = 1e-12


@dataclass(frozen=True)
class PeriodSum:
    series: TruncatedSeries
    kind: str
    specs: tuple
    order: int


@dataclass(frozen=True)
class CrossCheck:
    terms: int
    partial_sum: object
    difference: float
    tail_bound: float
    passed: bool


@dataclass(frozen=True)
class SpecialValue:
    value: object
    correction_divisor: object
    branch: str
    label: str
    point: object
    cross_check: CrossCheck | None = field(default=None)


# ---------------------------------------------------------------------------
# helpers


def _accumulate(order: int, q: int) -> list:
    return [QSqrt(0, 0, q) for _ in range(order + 1)]


def _tate_series(omega, n: int, order: int) -> TruncatedSeries:
    return expand_factor_product([(omega, n)], order)


def _finish(coeffs: list, tate, order: int, kind: str, specs: tuple) -> PeriodSum:
    series = TruncatedSeries(coeffs, order)
    if tate is not None:
        series = series * _tate_series(tate[0], tate[1], order)
    return PeriodSum(series, kind, specs, order)


def _check_order(order: int):
    if order < 0:
        raise NegativeOrder(f"order must be >= 0, got {order}")


# ---------------------------------------------------------------------------
# Rankin-Selberg


def _check_rs(pi: RepresentationSpec, sigma: RepresentationSpec):
    if pi.rank != sigma.rank:
        raise RankMismatch(f"ranks differ: {pi.rank} vs {sigma.rank}")
    if pi.q != sigma.q:
        raise FieldMismatch(f"residue fields differ: q = {pi.q} vs {sigma.q}")


def rs_mirabolic(pi: RepresentationSpec, sigma: RepresentationSpec, order: int) -> list:
    """Coefficients of ``sum W_pi(a) W_sigma(a) delta^-1(a) |det a|^(s-1)``
    over the torus of ``GL_{n-1}``."""
    _check_rs(pi, sigma)
    _check_order(order)
    n, q = pi.rank, pi.q
    ep, es = SchurEvaluator(pi.alpha), SchurEvaluator(sigma.alpha)
    coeffs = _accumulate(order, q)
    for lam in enumerate_dominant(n - 1, order):
        lam = pad(lam, n - 1)
        wp = essential_value(pi, lam, ep)
        if not wp:
            continue
        ws = essential_value(sigma, lam, es)
        if not ws:
            continue
        k = sum(lam)
        weight = q_power(q, modulus_exponent(n - 1, lam) + k)
        coeffs[k] = coeffs[k] + wp * ws * weight
    return coeffs


def rs_lattice_sum(
    pi: RepresentationSpec, sigma: RepresentationSpec, order: int = DEFAULT_ORDER
) -> PeriodSum:
    coeffs = rs_mirabolic(pi, sigma, order)
    tate = None
    if pi.is_unramified and sigma.is_unramified:
        tate = (pi.omega * sigma.omega, pi.rank)
    return _finish(coeffs, tate, order, "rs", (pi, sigma))


# ---------------------------------------------------------------------------
# Asai


def _extension(pi: RepresentationSpec, ext: QuadraticExtensionSpec | None):
    ext = ext or pi.extension
    if ext is None:
        raise InvariantViolation("an Asai sum needs a quadratic extension", "extension")
    if pi.q != ext.q_E:
        raise FieldMismatch(
            f"Satake parameters live over E with q_E = {ext.q_E}, spec has q = {pi.q}"
        )
    return ext


def asai_mirabolic(
    pi: RepresentationSpec, ext: QuadraticExtensionSpec | None, order: int
) -> list:
    """Torus sum over ``GL_{n-1}(F)``; the Whittaker function of ``pi`` (over E)
    sees the E-valuations ``scale * lam``."""
    ext = _extension(pi, ext)
    _check_order(order)
    n, qf, scale = pi.rank, ext.q_F, ext.valuation_scale
    ev = SchurEvaluator(pi.alpha)
    coeffs = _accumulate(order, qf)
    for lam in enumerate_dominant(n - 1, order):
        lam = pad(lam, n - 1)
        w = essential_value(pi, tuple(scale * p for p in lam), ev)
        if not w:
            continue
        k = sum(lam)
        weight = q_power(qf, modulus_exponent(n - 1, lam) + k)
        coeffs[k] = coeffs[k] + w * weight
    return coeffs


def asai_lattice_sum(
    pi: RepresentationSpec,
    ext: QuadraticExtensionSpec | None = None,
    order: int = DEFAULT_ORDER,
) -> PeriodSum:
    ext = _extension(pi, ext)
    coeffs = asai_mirabolic(pi, ext, order)
    tate = None
    if pi.is_unramified:
        tate = (central_char_restricted_to_F(pi.unramified_part, ext), pi.rank)
    return _finish(coeffs, tate, order, "asai", (pi,))


# ---------------------------------------------------------------------------
# Jacquet-Shalika


def js_even_mirabolic(pi: RepresentationSpec, order: int) -> list:
    """Sum over ``diag(a, 1)`` in ``GL_n`` of ``W(diag(a1, a1, a2, a2, ...))``
    weighted by ``delta_{B_n}^-2 |det|^s``."""
    if pi.rank % 2:
        raise OddRank(f"Jacquet-Shalika even sum needs even rank, got {pi.rank}")
    _check_order(order)
    n, q = pi.rank // 2, pi.q
    ev = SchurEvaluator(pi.alpha)
    coeffs = _accumulate(order, q)
    for mu in enumerate_dominant(n - 1, order):
        w = essential_value(pi, pad(double_columns(mu), 2 * n - 1), ev)
        if not w:
            continue
        weight = q_power(q, 2 * modulus_exponent(n, pad(mu, n)))
        k = sum(mu)
        coeffs[k] = coeffs[k] + w * weight
    return coeffs


def js_even_lattice_sum(pi: RepresentationSpec, order: int = DEFAULT_ORDER) -> PeriodSum:
    coeffs = js_even_mirabolic(pi, order)
    tate = (pi.omega, pi.rank // 2) if pi.is_unramified else None
    return _finish(coeffs, tate, order, "jse", (pi,))


def js_odd_mirabolic(pi: RepresentationSpec, order: int) -> list:
    """Sum over the torus of ``GL_n`` of ``W(diag(a1, a1, ..., an, an, 1))``
    weighted by ``delta_{B_n}^-2 |det|^(s-1)``."""
    if pi.rank % 2 == 0:
        raise EvenRank(f"Jacquet-Shalika odd sum needs odd rank, got {pi.rank}")
    _check_order(order)
    n, q = pi.rank // 2, pi.q
    ev = SchurEvaluator(pi.alpha)
    coeffs = _accumulate(order, q)
    for mu in enumerate_dominant(n, order):
        mu = pad(mu, n)
        w = essential_value(pi, double_columns(mu), ev)
        if not w:
            continue
        k = sum(mu)
        weight = q_power(q, 2 * modulus_exponent(n, mu) + k)
        coeffs[k] = coeffs[k] + w * weight
    return coeffs


def js_odd_lattice_sum(pi: RepresentationSpec, order: int = DEFAULT_ORDER) -> PeriodSum:
    coeffs = js_odd_mirabolic(pi, order)
    return _finish(coeffs, None, order, "jso", (pi,))


def js_doubled_schur_sum(pi: RepresentationSpec, order: int) -> list:
    """``sum_mu s_{(mu1, mu1, mu2, mu2, ...)}(alpha) t^|mu|`` straight from Schur
    polynomials, used to cross-examine the Whittaker-built JS sums."""
    if pi.rank % 2 == 0:
        length = pi.rank // 2 - 1 if pi.is_unramified else pi.rank // 2
    else:
        length = pi.rank // 2
    ev = SchurEvaluator(pi.alpha)
    coeffs = [Fraction(0)] * (order + 1)
    for mu in enumerate_dominant(length, order):
        coeffs[sum(mu)] += ev(double_columns(mu))
    return coeffs


# ---------------------------------------------------------------------------
# Bump-Friedberg


def bf_mirabolic(pi: RepresentationSpec, order: int) -> list:
    """``sum W_ur(J(b, b')) delta_{B_r}^(-1/2)(J(b, b')) |det bb'|^s``.

    For ramified ``pi`` the torus is that of ``GL_r`` (r unramified
    parameters); in the unramified case the mirabolic condition removes the
    last coordinate of ``J(b, b')``.
    """
    _check_order(order)
    r, q = pi.r, pi.q
    length = pi.rank - 1 if pi.is_unramified else r
    nb, nbp = (length + 1) // 2, length // 2
    ev = SchurEvaluator(pi.alpha)
    coeffs = _accumulate(order, q)
    for b in enumerate_dominant(nb, order):
        for bp in enumerate_dominant(nbp, order - sum(b)):
            try:
                mu = interleave(pad(b, nb), pad(bp, nbp))
            except NotDominant:
                continue
            mu = pad(mu, r)
            w = spherical_value(pi.unramified_part, mu, ev)
            if not w:
                continue
            weight = q_power(q, Fraction(modulus_exponent(r, mu), 2))
            k = sum(mu)
            coeffs[k] = coeffs[k] + w * weight
    return coeffs


def bf_lattice_sum(pi: RepresentationSpec, order: int = DEFAULT_ORDER) -> PeriodSum:
    coeffs = bf_mirabolic(pi, order)
    tate = (pi.omega, pi.rank) if pi.is_unramified else None
    return _finish(coeffs, tate, order, "bf", (pi,))


# ---------------------------------------------------------------------------
# Bump-Ginzburg


def bg_mirabolic(pi: RepresentationSpec, order: int) -> list:
    """Even weights ``lam = 2 mu`` on ``diag(a, 1)``: the essential function
    of ``pi`` against the semi-Whittaker function of the exceptional
    representation, whose torus values contribute
    ``delta_{B_m}^(1/4) delta_{B_{m-1}}^(-3/4) |det|^((2s+1)/4 - 1)``."""
    _check_order(order)
    m, q = pi.rank, pi.q
    ev = SchurEvaluator(pi.alpha)
    coeffs = _accumulate(order, q)
    for mu in enumerate_dominant(m - 1, order):
        lam = pad(tuple(2 * p for p in mu), m - 1)
        w = essential_value(pi, lam, ev)
        if not w:
            continue
        size = sum(lam)
        expo = Fraction(
            -modulus_exponent(m, lam + (0,)) + 3 * modulus_exponent(m - 1, lam) + 3 * size,
            4,
        )
        coeffs[size // 2] = coeffs[size // 2] + w * q_power(q, expo)
    return coeffs


def bg_even_sum(pi: RepresentationSpec, order: int = DEFAULT_ORDER) -> PeriodSum:
    coeffs = bg_mirabolic(pi, order)
    tate = (pi.omega ** 2, pi.rank) if pi.is_unramified else None
    return _finish(coeffs, tate, order, "bg", (pi,))


# ---------------------------------------------------------------------------
# dispatch


def _one(specs: Sequence, kind: str) -> RepresentationSpec:
    if len(specs) != 1:
        raise InvariantViolation(f"kind {kind!r} takes one spec, got {len(specs)}", "specs")
    return specs[0]


def lattice_sum(kind: str, specs: Sequence[RepresentationSpec], order: int = DEFAULT_ORDER) -> PeriodSum:
    """The full test-vector integral as a series in ``t``."""
    if kind == "rs":
        if len(specs) != 2:
            raise InvariantViolation(f"kind 'rs' takes two specs, got {len(specs)}", "specs")
        return rs_lattice_sum(specs[0], specs[1], order)
    pi = _one(specs, kind)
    if kind == "asai":
        return asai_lattice_sum(pi, None, order)
    if kind == "jse":
        return js_even_lattice_sum(pi, order)
    if kind == "jso":
        return js_odd_lattice_sum(pi, order)
    if kind == "bf":
        return bf_lattice_sum(pi, order)
    if kind == "bg":
        return bg_even_sum(pi, order)
    raise InvariantViolation(f"unknown period kind {kind!r}", "kind")


def period_series(kind: str, specs: Sequence[RepresentationSpec], order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The mirabolic sum alone, whose value at the special point is the period."""
    builders = {
        "rs": lambda: rs_mirabolic(specs[0], specs[1], order),
        "asai": lambda: asai_mirabolic(_one(specs, kind), None, order),
        "jse": lambda: js_even_mirabolic(_one(specs, kind), order),
        "jso": lambda: js_odd_mirabolic(_one(specs, kind), order),
        "bf": lambda: bf_mirabolic(_one(specs, kind), order),
        "bg": lambda: bg_mirabolic(_one(specs, kind), order),
    }
    if kind not in builders:
        raise InvariantViolation(f"unknown period kind {kind!r}", "kind")
    if kind == "rs" and len(specs) != 2:
        raise InvariantViolation(f"kind 'rs' takes two specs, got {len(specs)}", "specs")
    return TruncatedSeries(builders[kind](), order)


def expected_lfactor(kind: str, specs: Sequence[RepresentationSpec]) -> LFactor:
    if kind == "rs":
        return rankin_selberg(specs[0].unramified_part, specs[1].unramified_part)
    pi = _one(specs, kind)
    if kind == "asai":
        return asai(pi.unramified_part, _extension(pi, None))
    if kind in ("jse", "jso"):
        return exterior_square(pi.unramified_part)
    if kind == "bf":
        return bump_friedberg(pi.unramified_part)
    if kind == "bg":
        return symmetric_square_formal(pi.unramified_part)
    raise InvariantViolation(f"unknown period kind {kind!r}", "kind")


# ---------------------------------------------------------------------------
# special values


_L_NAMES = {
    "rs": "L(1, pi x sigma)",
    "asai": "L(1, pi, As)",
    "jse": "L(1, pi, wedge^2)",
    "jso": "L(1, pi, wedge^2)",
    "bf": "L(1/2, pi) L(1, pi, wedge^2)",
    "bg": "L(1, pi, Sym^2)",
}


def special_point(kind: str, specs: Sequence[RepresentationSpec]):
    """``t0`` with ``s = 1`` (``s = 1/2`` for Bump-Friedberg); Asai uses
    ``u0 = 1/q_F``."""
    pi = specs[0]
    if kind == "asai":
        return Fraction(1, _extension(pi, None).q_F)
    if kind == "bf":
        return q_power(pi.q, Fraction(-1, 2))
    return Fraction(1, pi.q)


def tate_arguments(kind: str, specs: Sequence[RepresentationSpec], integral: str = "mirabolic"):
    """``(n, omega, q)`` of the Tate divisor ``L(n, omega)``, or None when the
    branch has no correction."""
    pi = specs[0]
    if kind == "rs":
        if pi.is_unramified and specs[1].is_unramified:
            return (Fraction(pi.rank), pi.omega * specs[1].omega, pi.q)
        return None
    if not pi.is_unramified:
        return None
    if kind == "asai":
        ext = _extension(pi, None)
        return (Fraction(pi.rank), central_char_restricted_to_F(pi.unramified_part, ext), ext.q_F)
    if kind == "jse":
        return (Fraction(pi.rank // 2), pi.omega, pi.q)
    if kind == "jso":
        return None
    if kind == "bf":
        return (Fraction(pi.rank, 2), pi.omega, pi.q)
    if kind == "bg":
        if integral == "full":
            return None
        return (Fraction(pi.rank), pi.omega ** 2, pi.q)
    raise InvariantViolation(f"unknown period kind {kind!r}", "kind")


def _simplify(x):
    if isinstance(x, QSqrt) and x.is_rational():
        return x.a
    return x


def special_value(
    kind: str,
    specs: Sequence[RepresentationSpec],
    integral: str = "mirabolic",
    cross_check: bool = False,
) -> SpecialValue:
    """Exact period at the special point from the closed form.

    ``integral="full"`` is only meaningful for ``bg``: it evaluates the
    complete integral, which carries no Tate correction.
    """
    if integral not in ("mirabolic", "full"):
        raise InvariantViolation(f"integral must be 'mirabolic' or 'full', got {integral!r}", "integral")
    if kind == "rs":
        if len(specs) != 2:
            raise InvariantViolation("kind 'rs' takes two specs", "specs")
        _check_rs(specs[0], specs[1])
    lf = expected_lfactor(kind, specs)
    t0 = special_point(kind, specs)
    lval = lf.evaluate(t0, special=True)
    targs = tate_arguments(kind, specs, integral)
    ramified = any(not s.is_unramified for s in specs)
    branch = "ramified" if ramified else "unramified"
    if targs is None:
        divisor = Fraction(1)
        value = lval
        label = _L_NAMES[kind]
    else:
        n, omega, q = targs
        divisor = tate_value(n, omega, q)
        value = lval / divisor
        label = f"{_L_NAMES[kind]} / L({format_scalar(n)}, {_omega_name(kind)})"
    value = _simplify(value)
    check = None
    if cross_check:
        check = numeric_cross_check(kind, specs, value, lf, targs, t0, integral)
    return SpecialValue(value, _simplify(divisor), branch, label, t0, check)


def _omega_name(kind: str) -> str:
    return {
        "rs": "omega_pi omega_sigma",
        "asai": "omega_pi|F",
        "bg": "omega_pi^2",
    }.get(kind, "omega_pi")


def _upper_rational(x) -> Fraction:
    """A rational upper bound for a positive real, tight to about 2^-60."""
    if isinstance(x, Fraction) or isinstance(x, int):
        return Fraction(x)
    if isinstance(x, QSqrt) and x.is_rational():
        return x.a
    scale = 1 << 60
    return Fraction(math.floor(float(x) * scale) + 2, scale)


def _terms_needed(factors, omega_n, x: Fraction, tol: float):
    """Smallest K whose tail bound is below ``tol``, using the majorant
    ``prod (1 - |c| x^k)^(-1)`` (times ``1 + |omega| x^n`` when a Tate
    divisor applies).  Returns ``(K, bound)``; K may exceed the cap, in which case
    the bound at the cap is returned."""
    maj = [(abs(c), k) for c, k in factors]
    for c, k in maj:
        if c * x ** k >= 1:
            raise ConvergenceViolation(
                f"partial sums diverge: factor with |c| = {c}, t-power {k} has |c| t0^{k} >= 1"
            )
    total = Fraction(1)
    for c, k in maj:
        total /= 1 - c * x ** k
    cap = MAX_CROSS_CHECK_TERMS
    coeffs = list(expand_factor_product(maj, cap).coeffs)
    if omega_n is not None:
        w, n = omega_n
        total *= 1 + abs(w) * x ** n
        shifted = [0] * n + [abs(w) * c for c in coeffs[: cap + 1 - n]]
        coeffs = [a + b for a, b in zip(coeffs, shifted)]
    partial = Fraction(0)
    xp = Fraction(1)
    for k, c in enumerate(coeffs):
        partial += c * xp
        xp *= x
        bound = total - partial
        if float(bound) < tol:
            return k, float(bound)
    return cap + 1, float(total - partial)


def numeric_cross_check(kind, specs, value, lf: LFactor, targs, t0, integral="mirabolic") -> CrossCheck:
    """Exact partial sums of the lattice series at ``t0``, compared with the
    closed form in floating point.  The number of terms comes from a tail
    bound, so the comparison is meaningful at ``CROSS_CHECK_TOL``."""
    omega_n = None
    if targs is not None:
        # the Tate series is in t^deg; for BF deg = m while the divisor is L(m/2, omega)
        deg = specs[0].rank if kind == "bf" else int(targs[0])
        omega_n = (targs[1], deg)
    k_needed, bound = _terms_needed(lf.factors, omega_n, _upper_rational(t0), CROSS_CHECK_TOL / 10)
    terms = min(k_needed, MAX_CROSS_CHECK_TERMS)
    if targs is None:
        series = lattice_sum(kind, specs, terms).series
    else:
        series = period_series(kind, specs, terms)
    partial = _simplify(series.partial_sum(t0))
    diff = abs(float(value - partial))
    passed = k_needed <= MAX_CROSS_CHECK_TERMS and diff < CROSS_CHECK_TOL
    return CrossCheck(terms, partial, diff, bound, passed)
