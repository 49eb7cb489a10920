"""Representation data: rank, conductor, the Satake multiset of the
unramified part, and the central character at the uniformizer.

A :class:`RepresentationSpec` is all the downstream computations ever look
at.  For a representation over a quadratic extension ``E/F`` (Asai), the
spec carries a :class:`QuadraticExtensionSpec` and its Satake parameters
live over ``E``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .errors import (
    EmptyParams,
    InvariantViolation,
    RankViolation,
    SchemaError,
)

DEFAULT_Q = 3

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def is_prime_power(q: int) -> bool:
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            while q % p == 0:
                q //= p
            return q == 1
        p += 1
    return True


def _product(values: Iterable) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


@dataclass(frozen=True)
class SatakeParams:
    """A multiset of nonzero rationals together with the residue cardinality.

    Values are stored sorted, so equality is multiset equality.
    """

    values: tuple
    q: int

    def __init__(self, values: Iterable, q: int):
        vals = tuple(sorted(Fraction(v) for v in values))
        if any(v == 0 for v in vals):
            raise InvariantViolation("Satake parameters must be nonzero", "satake")
        if not is_prime_power(q):
            raise InvariantViolation(f"q = {q!r} is not a prime power", "field.q")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "q", q)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def size(self) -> int:
        return len(self.values)

    def product(self) -> Fraction:
        return _product(self.values)


@dataclass(frozen=True)
class QuadraticExtensionSpec:
    kind: str
    q_F: int

    def __post_init__(self):
        if self.kind not in ("unramified", "ramified"):
            raise InvariantViolation(
                f"extension kind must be 'unramified' or 'ramified', got {self.kind!r}",
                "extension.kind",
            )
        if not is_prime_power(self.q_F):
            raise InvariantViolation(f"q = {self.q_F!r} is not a prime power", "field.q")
        if self.kind == "ramified" and self.q_F % 2 == 0:
            raise InvariantViolation(
                "ramified extensions need odd residue characteristic", "field.q"
            )

    @property
    def q_E(self) -> int:
        return self.q_F ** 2 if self.kind == "unramified" else self.q_F

    @property
    def valuation_scale(self) -> int:
        """``v_E(varpi_F)``: 1 if unramified, 2 if ramified."""
        return 1 if self.kind == "unramified" else 2


@dataclass(frozen=True)
class RepresentationSpec:
    rank: int
    conductor: int
    unramified_part: SatakeParams
    central_char_value: Fraction
    extension: QuadraticExtensionSpec | None = field(default=None)

    def __post_init__(self):
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InvariantViolation(f"rank must be >= 1, got {self.rank!r}", "rank")
        if not isinstance(self.conductor, int) or self.conductor < 0:
            raise InvariantViolation(
                f"conductor must be >= 0, got {self.conductor!r}", "conductor"
            )
        object.__setattr__(self, "central_char_value", Fraction(self.central_char_value))
        r = self.unramified_part.size
        if r > self.rank:
            raise RankViolation(
                f"{r} Satake parameters exceed rank {self.rank}", "satake"
            )
        if self.conductor == 0:
            if r != self.rank:
                raise InvariantViolation(
                    f"an unramified spec needs exactly rank = {self.rank} Satake "
                    f"parameters, got {r}",
                    "satake",
                )
            if self.central_char_value != self.unramified_part.product():
                raise InvariantViolation(
                    "for an unramified spec omega must equal the product of the "
                    f"Satake parameters ({self.unramified_part.product()})",
                    "omega",
                )
        if self.central_char_value == 0:
            raise InvariantViolation("omega must be nonzero", "omega")
        if self.extension is not None and self.extension.q_E != self.unramified_part.q:
            raise InvariantViolation(
                f"Satake parameters over E need q_E = {self.extension.q_E}", "field.q"
            )

    @property
    def q(self) -> int:
        return self.unramified_part.q

    @property
    def r(self) -> int:
        return self.unramified_part.size

    @property
    def alpha(self) -> tuple:
        return self.unramified_part.values

    @property
    def omega(self) -> Fraction:
        return self.central_char_value

    @property
    def is_unramified(self) -> bool:
        return self.conductor == 0

    @property
    def base_q(self) -> int:
        """Residue cardinality of the base field (``q_F`` for specs over E)."""
        return self.extension.q_F if self.extension else self.q


def make_unramified(params: SatakeParams) -> RepresentationSpec:
    if params.size == 0:
        raise EmptyParams("an unramified representation needs at least one parameter")
    return RepresentationSpec(params.size, 0, params, params.product())


def make_ramified(
    rank: int, conductor: int, unramified_part: SatakeParams, omega
) -> RepresentationSpec:
    if unramified_part.size > rank:
        raise RankViolation(
            f"{unramified_part.size} Satake parameters exceed rank {rank}", "satake"
        )
    if not isinstance(conductor, int) or conductor < 1:
        raise InvariantViolation(
            f"a ramified spec needs conductor >= 1, got {conductor!r}", "conductor"
        )
    return RepresentationSpec(rank, conductor, unramified_part, Fraction(omega))


def central_char_restricted_to_F(
    params: SatakeParams, ext: QuadraticExtensionSpec
) -> Fraction:
    """``omega(varpi_F)`` for the unramified part of a representation over E.

    In the ramified case ``varpi_F`` is ``varpi_E^2`` times a unit, and
    unramified characters are trivial on units.
    """
    return params.product() ** ext.valuation_scale


# ---------------------------------------------------------------------------
# config I/O

_KEYS = {"rank", "conductor", "satake", "omega", "field", "extension"}


def _parse_int(obj: Mapping, key: str, path: str) -> int:
    if key not in obj:
        raise SchemaError("missing required field", path)
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"expected an integer, got {v!r}", path)
    return v


def parse_rational(v: Any, path: str) -> Fraction:
    """Exact rational from an integer or a ``"p/q"`` string; floats are refused."""
    if isinstance(v, bool):
        raise SchemaError(f"expected a rational, got {v!r}", path)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str) and _RATIONAL.match(v.strip()):
        try:
            return Fraction(v.strip())
        except ZeroDivisionError:
            raise SchemaError(f"zero denominator in {v!r}", path) from None
    raise SchemaError(f"expected an integer or 'p/q' string, got {v!r}", path)


def parse_spec(config: str | Mapping, default_q: int = DEFAULT_Q) -> RepresentationSpec:
    """Validate a JSON config (text or already-decoded mapping).

    ``default_q`` is used when the config has no ``field`` entry.
    """
    if isinstance(config, str):
        try:
            config = json.loads(config)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    if not isinstance(config, Mapping):
        raise SchemaError("config must be a JSON object")
    extra = set(config) - _KEYS
    if extra:
        raise SchemaError(f"unknown field(s) {sorted(extra)}", sorted(extra)[0])
    rank = _parse_int(config, "rank", "rank")
    conductor = _parse_int(config, "conductor", "conductor")
    if "satake" not in config:
        raise SchemaError("missing required field", "satake")
    sat = config["satake"]
    if not isinstance(sat, list):
        raise SchemaError("expected a list of rationals", "satake")
    values = [parse_rational(v, f"satake[{i}]") for i, v in enumerate(sat)]

    q = default_q
    if "field" in config:
        fld = config["field"]
        if not isinstance(fld, Mapping) or set(fld) - {"q"}:
            raise SchemaError("expected {\"q\": int}", "field")
        q = _parse_int(fld, "q", "field.q")

    ext = None
    if "extension" in config:
        e = config["extension"]
        if not isinstance(e, Mapping) or set(e) != {"kind"}:
            raise SchemaError("expected {\"kind\": \"unramified\"|\"ramified\"}", "extension")
        if not isinstance(e["kind"], str):
            raise SchemaError("expected a string", "extension.kind")
        ext = QuadraticExtensionSpec(e["kind"], q)

    params = SatakeParams(values, ext.q_E if ext else q)
    if "omega" in config:
        omega = parse_rational(config["omega"], "omega")
    elif conductor == 0:
        omega = params.product()
    else:
        raise SchemaError("omega is required when conductor > 0", "omega")
    if rank < 1:
        raise InvariantViolation(f"rank must be >= 1, got {rank}", "rank")
    if params.size > rank:
        raise RankViolation(f"{params.size} Satake parameters exceed rank {rank}", "satake")
    return RepresentationSpec(rank, conductor, params, omega, ext)


def spec_to_dict(spec: RepresentationSpec) -> dict:
    out = {
        "rank": spec.rank,
        "conductor": spec.conductor,
        "satake": [str(v) for v in spec.alpha],
        "omega": str(spec.omega),
        "field": {"q": spec.base_q},
    }
    if spec.extension is not None:
        out["extension"] = {"kind": spec.extension.kind}
    return out


def serialize_spec(spec: RepresentationSpec) -> str:
    return json.dumps(spec_to_dict(spec), sort_keys=True)
