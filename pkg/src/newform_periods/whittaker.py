"""Whittaker functions on torus elements ``diag(varpi^lam_1, ..., varpi^lam_r)``.

Only valuations matter: the additive character is unramified and every
character in sight is trivial on units.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import QSqrt, q_power
from .partitions import is_dominant
from .reps import RepresentationSpec, SatakeParams
from .schur import SchurEvaluator, schur


def modulus_exponent(r: int, lam: Sequence[int]) -> int:
    """``e`` with ``delta_B(a_lam) = q^(-e)`` on ``GL_r``."""
    if len(lam) != r:
        raise ValueError(f"expected {r} valuations, got {len(lam)}")
    return sum(p * (r + 1 - 2 * i) for i, p in enumerate(lam, start=1))


def spherical_value(
    params: SatakeParams, lam: Sequence[int], evaluator: SchurEvaluator | None = None
) -> QSqrt:
    """Normalized spherical Whittaker function: ``q^(-e/2) s_lam(alpha)`` on the
    dominant cone, zero elsewhere."""
    r = params.size
    lam = tuple(lam)
    if len(lam) != r:
        raise ValueError(f"expected {r} valuations, got {len(lam)}")
    if not is_dominant(lam):
        return QSqrt(0, 0, params.q)
    s = evaluator(lam) if evaluator is not None else schur(lam, params.values)
    return q_power(params.q, Fraction(-modulus_exponent(r, lam), 2)) * s


def essential_value(
    spec: RepresentationSpec,
    lam: Sequence[int],
    evaluator: SchurEvaluator | None = None,
) -> QSqrt:
    """Essential Whittaker function at ``diag(a_lam, 1)``, ``lam`` of length n-1.

    With ``r`` unramified parameters, the value is the spherical function of
    the unramified part at the first ``r`` coordinates twisted by
    ``|det|^((n-r)/2)``; the remaining coordinates must be units and the
    ``r``-th one integral.
    """
    n, r, q = spec.rank, spec.r, spec.q
    lam = tuple(lam)
    if len(lam) != n - 1:
        raise ValueError(f"expected {n - 1} valuations, got {len(lam)}")
    zero = QSqrt(0, 0, q)
    if r == n:
        return spherical_value(spec.unramified_part, lam + (0,), evaluator)
    if any(p != 0 for p in lam[r:]):
        return zero
    head = lam[:r]
    if r and head[-1] < 0:
        return zero
    if not is_dominant(head):
        return zero
    w = spherical_value(spec.unramified_part, head, evaluator)
    return w * q_power(q, Fraction(-(n - r) * sum(head), 2))
