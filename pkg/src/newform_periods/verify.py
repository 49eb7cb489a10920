"""Named verification scenarios and JSON-lines reports.

A scenario is kept as its raw JSON object and parsed inside
:func:`run_scenario`, so configuration errors end up in that scenario's
report instead of aborting the suite, and scenarios can be shipped to worker
processes as plain dicts.
"""

from __future__ import annotations

import hashlib
import json
import os
import platform
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations, combinations_with_replacement
from typing import Any, Iterable, Mapping, Sequence

from . import __version__
from .algebra import QSqrt, TruncatedSeries, expand_factor_product, format_scalar
from .errors import (
    ConfigError,
    InsufficientGrid,
    InvariantViolation,
    MathPreconditionError,
    PeriodsError,
    SchemaError,
    FieldMismatch,
)
from .lfactors import LFactor
from .partitions import conjugate, enumerate_dominant, is_even_rows
from .periods import (
    DEFAULT_ORDER,
    KINDS,
    expected_lfactor,
    js_doubled_schur_sum,
    lattice_sum,
    period_series,
    special_value,
    tate_arguments,
)
from .reps import parse_rational, parse_spec
from .schur import SchurEvaluator

SUITE_ENV = "WHITTAKER_SUITE_DIR"
IDENTITIES = ("cauchy", "littlewood", "littlewood-even-columns", "littlewood-even-rows")

_SCENARIO_KEYS = {
    "name", "kind", "specs", "order", "expected", "special_value", "integral",
    "cross_check", "distinguished", "corrections", "description",
    "identity", "r", "p", "grid",
}


@dataclass(frozen=True)
class Scenario:
    name: str
    config: Mapping

    @classmethod
    def from_config(cls, config: Mapping) -> "Scenario":
        name = config.get("name") if isinstance(config, Mapping) else None
        if not isinstance(name, str) or not name:
            name = "<unnamed>"
        return cls(name, config)


@dataclass
class Report:
    scenario: str
    kind: str
    passed: bool
    checks: dict = field(default_factory=dict)
    first_mismatch: dict | None = None
    error: dict | None = None
    timing: float | None = None
    toolchain: dict = field(default_factory=dict)

    @property
    def exit_class(self) -> int:
        """0 pass, 1 verification failure, 2 config error, 3 precondition."""
        if self.error:
            return self.error["exit_code"]
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        out = {
            "scenario": self.scenario,
            "kind": self.kind,
            "passed": self.passed,
            "checks": self.checks,
            "first_mismatch": self.first_mismatch,
            "error": self.error,
            "toolchain": self.toolchain,
        }
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def line(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def toolchain() -> dict:
    return {"python": platform.python_version(), "newform_periods": __version__}


def _scalar(x) -> str:
    return format_scalar(x)


def _error_dict(exc: Exception) -> dict:
    if isinstance(exc, ConfigError):
        code = 2
    elif isinstance(exc, MathPreconditionError):
        code = 3
    else:
        code = 1
    out = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    factor = getattr(exc, "factor", None)
    if factor:
        out["factor"] = factor
    return out


# ---------------------------------------------------------------------------
# scenario parsing


def _require(config: Mapping, key: str, kind: type, path: str | None = None):
    if key not in config:
        raise SchemaError("missing required field", path or key)
    v = config[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise SchemaError(f"expected an integer, got {v!r}", path or key)
    if kind is not int and not isinstance(v, kind):
        raise SchemaError(f"expected {kind.__name__}, got {v!r}", path or key)
    return v


def _flag(config: Mapping, key: str, default: bool = False) -> bool:
    v = config.get(key, default)
    if not isinstance(v, bool):
        raise SchemaError(f"expected true/false, got {v!r}", key)
    return v


def _parse_specs(config: Mapping) -> tuple:
    raw = _require(config, "specs", list)
    specs = []
    for i, s in enumerate(raw):
        try:
            specs.append(parse_spec(s))
        except ConfigError as exc:
            raise type(exc)(str(exc), f"specs[{i}]") from None
    if len({s.base_q for s in specs}) > 1:
        raise FieldMismatch("all specs in a scenario must share q", "specs")
    return tuple(specs)


def _parse_expected(config: Mapping, kind: str, specs: tuple) -> LFactor:
    exp = config.get("expected", "default")
    if isinstance(exp, str):
        if exp != "default" and exp != _DEFAULT_NAMES[kind]:
            raise SchemaError(
                f"expected {_DEFAULT_NAMES[kind]!r} (or an explicit factor list) for kind "
                f"{kind!r}, got {exp!r}",
                "expected",
            )
        return expected_lfactor(kind, specs)
    if isinstance(exp, Mapping) and "factors" in exp:
        factors = []
        for i, f in enumerate(exp["factors"]):
            if not isinstance(f, list) or len(f) != 2:
                raise SchemaError("factor must be [coefficient, power]", f"expected.factors[{i}]")
            c = parse_rational(f[0], f"expected.factors[{i}][0]")
            k = f[1]
            if k not in (1, 2) or isinstance(k, bool):
                raise SchemaError("power must be 1 or 2", f"expected.factors[{i}][1]")
            factors.append((c, k))
        return LFactor(factors)
    raise SchemaError("expected a constructor name or {\"factors\": [...]}", "expected")


_DEFAULT_NAMES = {
    "rs": "rankin_selberg",
    "asai": "asai",
    "jse": "exterior_square",
    "jso": "exterior_square",
    "bf": "bump_friedberg",
    "bg": "symmetric_square_formal",
}


# ---------------------------------------------------------------------------
# running


def _series_check(series: TruncatedSeries, expected: TruncatedSeries) -> tuple[dict, dict | None]:
    k = series.first_mismatch(expected)
    check = {"passed": k is None, "order": series.order}
    mismatch = None
    if k is not None:
        mismatch = {
            "degree": k,
            "computed": _scalar(series[k]),
            "expected": _scalar(expected[k]),
        }
    return check, mismatch


def _sqrt_free(series: TruncatedSeries) -> bool:
    return all(not (isinstance(c, QSqrt) and c.b) for c in series.coeffs)


def run_scenario(sc: Scenario | Mapping, include_timing: bool = False) -> Report:
    if not isinstance(sc, Scenario):
        sc = Scenario.from_config(sc)
    start = time.perf_counter()
    kind = sc.config.get("kind", "?") if isinstance(sc.config, Mapping) else "?"
    report = Report(sc.name, str(kind), False, toolchain=toolchain())
    try:
        _run_into(sc, report)
    except PeriodsError as exc:
        report.passed = False
        report.error = _error_dict(exc)
    if include_timing:
        report.timing = round(time.perf_counter() - start, 6)
    return report


def _run_into(sc: Scenario, report: Report):
    config = sc.config
    if not isinstance(config, Mapping):
        raise SchemaError("scenario must be a JSON object")
    extra = set(config) - _SCENARIO_KEYS
    if extra:
        raise SchemaError(f"unknown field(s) {sorted(extra)}", sorted(extra)[0])
    if sc.name == "<unnamed>":
        raise SchemaError("missing required field", "name")
    kind = _require(config, "kind", str)
    if kind == "certify":
        identity = _require(config, "identity", str)
        r = _require(config, "r", int)
        p = config.get("p")
        order = _require(config, "order", int)
        grid = config.get("grid")
        if grid is not None:
            if grid == "random":
                grid = None
                seed = _seed(sc.name)
            elif isinstance(grid, list):
                grid = [parse_rational(g, f"grid[{i}]") for i, g in enumerate(grid)]
                seed = None
            else:
                raise SchemaError("grid must be a list of rationals or \"random\"", "grid")
        else:
            seed = None
        sub = grid_certify(identity, r, order, p=p, grid=grid, seed=seed, name=sc.name)
        report.passed, report.checks, report.first_mismatch = sub.passed, sub.checks, sub.first_mismatch
        return
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {list(KINDS) + ['certify']}", "kind")
    order = config.get("order", DEFAULT_ORDER)
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise SchemaError(f"order must be a nonnegative integer, got {order!r}", "order")
    specs = _parse_specs(config)
    expected = _parse_expected(config, kind, specs)

    ps = lattice_sum(kind, specs, order)
    checks: dict[str, Any] = {}
    checks["constant_term"] = {"passed": ps.series[0] == 1, "value": _scalar(ps.series[0])}
    checks["series"], report.first_mismatch = _series_check(ps.series, expected.series(order))
    checks["series"]["expected"] = str(expected)
    checks["sqrt_q_vanishing"] = {"passed": _sqrt_free(ps.series)}

    if kind in ("jse", "jso"):
        doubled = TruncatedSeries(js_doubled_schur_sum(specs[0], order), order)
        mir = period_series(kind, specs, order)
        k = mir.first_mismatch(doubled)
        checks["doubled_support"] = {"passed": k is None}
        if k is not None:
            checks["doubled_support"]["degree"] = k

    integral = config.get("integral", "mirabolic")
    if integral not in ("mirabolic", "full"):
        raise SchemaError("integral must be 'mirabolic' or 'full'", "integral")
    targs = tate_arguments(kind, specs, integral)

    if "corrections" in config:
        want = config["corrections"]
        if want is None:
            ok = targs is None
        elif isinstance(want, list) and len(want) == 2:
            n = parse_rational(want[0], "corrections[0]")
            w = parse_rational(want[1], "corrections[1]")
            ok = targs is not None and targs[0] == n and targs[1] == w
        else:
            raise SchemaError("corrections must be null or [n, omega]", "corrections")
        checks["corrections"] = {
            "passed": ok,
            "computed": None if targs is None else [_scalar(targs[0]), _scalar(targs[1])],
        }

    if _flag(config, "special_value"):
        checks["special_value"] = _special_check(kind, specs, expected, targs, integral, order, config)

    if _flag(config, "distinguished"):
        omega = None if targs is None else targs[1]
        checks["distinguished"] = {
            "passed": omega == 1,
            "omega": None if omega is None else _scalar(omega),
        }

    report.checks = checks
    report.passed = all(c["passed"] for c in checks.values())


def _special_check(kind, specs, expected: LFactor, targs, integral, order, config) -> dict:
    """The period equals the value of the mirabolic series at the special
    point; check that series against ``L`` (divided by the Tate series when a
    correction applies), then record the closed-form value."""
    sv = special_value(kind, specs, integral=integral, cross_check=_flag(config, "cross_check"))
    if targs is None:
        series = lattice_sum(kind, specs, order).series if integral == "full" else period_series(kind, specs, order)
        target = expected.series(order)
    else:
        series = period_series(kind, specs, order)
        deg = specs[0].rank if kind == "bf" else int(targs[0])
        target = expected.series(order) * TruncatedSeries([1] + [0] * (deg - 1) + [-targs[1]], order)
    k = series.first_mismatch(target)
    out = {
        "passed": k is None,
        "value": _scalar(sv.value),
        "correction_divisor": _scalar(sv.correction_divisor),
        "branch": sv.branch,
        "label": sv.label,
        "point": _scalar(sv.point),
        "period_series_order": order,
    }
    if k is not None:
        out["period_series_mismatch"] = {
            "degree": k, "computed": _scalar(series[k]), "expected": _scalar(target[k]),
        }
    if sv.cross_check is not None:
        cc = sv.cross_check
        out["cross_check"] = {
            "passed": cc.passed,
            "terms": cc.terms,
            "difference": f"{cc.difference:.3e}",
            "tail_bound": f"{cc.tail_bound:.3e}",
        }
        out["passed"] = out["passed"] and cc.passed
    return out


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteResult:
    reports: list
    summary: dict

    def lines(self) -> list[str]:
        return [r.line() for r in self.reports] + [json.dumps(self.summary, sort_keys=True)]

    @property
    def exit_code(self) -> int:
        codes = {r.exit_class for r in self.reports}
        for code in (2, 3, 1):
            if code in codes:
                return code
        return 0


def summarize(reports: Sequence[Report]) -> dict:
    n = len(reports)
    passed = sum(1 for r in reports if r.passed)
    errors = sum(1 for r in reports if r.error)
    return {
        "summary": f"{n} run, {passed} passed, {n - passed} failed",
        "run": n,
        "passed": passed,
        "failed": n - passed,
        "errors": errors,
    }


def _run_timed(sc):
    return run_scenario(sc, include_timing=True)


def run_suite(
    scenarios: Iterable[Scenario | Mapping], jobs: int = 1, include_timing: bool = False
) -> SuiteResult:
    scs = [s if isinstance(s, Scenario) else Scenario.from_config(s) for s in scenarios]
    fn = _run_timed if include_timing else run_scenario
    if jobs > 1 and len(scs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(fn, scs))
    else:
        reports = [fn(s) for s in scs]
    reports.sort(key=lambda r: r.scenario)
    return SuiteResult(reports, summarize(reports))


def load_scenarios(obj: Any) -> list[Scenario]:
    """Scenarios from a decoded suite file: a list, a single scenario object,
    or ``{"scenarios": [...]}``."""
    if isinstance(obj, Mapping) and "scenarios" in obj:
        obj = obj["scenarios"]
    elif isinstance(obj, Mapping):
        obj = [obj]
    if not isinstance(obj, list):
        raise SchemaError("a suite must be a list of scenarios")
    scs = [Scenario.from_config(c) for c in obj]
    seen = set()
    for s in scs:
        if s.name in seen and s.name != "<unnamed>":
            raise SchemaError(f"duplicate scenario name {s.name!r}", "name")
        seen.add(s.name)
    return scs


def load_suite(name: str) -> list[Scenario]:
    """Look up ``<name>.json`` in ``$WHITTAKER_SUITE_DIR`` and then among the
    suites shipped with the package."""
    directory = os.environ.get(SUITE_ENV)
    if directory:
        path = os.path.join(directory, f"{name}.json")
        if os.path.isfile(path):
            with open(path, encoding="utf-8") as fh:
                return load_scenarios(_load_json(fh.read(), path))
    res = resources.files("newform_periods").joinpath("suites", f"{name}.json")
    if res.is_file():
        return load_scenarios(_load_json(res.read_text(encoding="utf-8"), name))
    raise ConfigError(f"unknown suite {name!r}", "suite")


def _load_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {where}: {exc}") from None


# ---------------------------------------------------------------------------
# polynomial identity certification


def _seed(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "big")


def degree_bound(identity: str, order: int) -> int:
    """Bound on the degree in any single variable of the ``t^k`` coefficients,
    ``k <= order``, of both sides of ``identity``."""
    if identity in ("cauchy", "littlewood", "littlewood-even-columns"):
        return order
    if identity == "littlewood-even-rows":
        return 2 * order
    raise InvariantViolation(f"unknown identity {identity!r}; expected one of {IDENTITIES}", "identity")


def _lhs_terms(identity: str, r: int, order: int) -> list:
    """``(partition, t-degree)`` pairs on the Schur side."""
    if identity in ("cauchy", "littlewood"):
        return [(lam, sum(lam)) for lam in enumerate_dominant(r, order)]
    if identity == "littlewood-even-columns":
        return [
            (lam, sum(lam) // 2)
            for lam in enumerate_dominant(r, 2 * order)
            if is_even_rows(conjugate(lam))
        ]
    return [(lam, sum(lam) // 2) for lam in enumerate_dominant(r, 2 * order) if is_even_rows(lam)]


def _rhs_factors(identity: str, x: Sequence, y: Sequence | None = None) -> list:
    if identity == "cauchy":
        return [(a * b, 1) for a in x for b in y]
    if identity == "littlewood":
        return [(a, 1) for a in x] + [(a * b, 2) for a, b in combinations(x, 2)]
    if identity == "littlewood-even-columns":
        return [(a * b, 1) for a, b in combinations(x, 2)]
    return [(x[i] * x[j], 1) for i in range(len(x)) for j in range(i, len(x))]


def _schur_side(terms, x, order) -> tuple:
    ev = SchurEvaluator(x)
    return tuple((lam, k, ev(lam)) for lam, k in terms if k <= order)


def grid_certify(
    identity: str,
    r: int,
    order: int,
    p: int | None = None,
    grid: Sequence | None = None,
    seed: int | None = None,
    name: str | None = None,
) -> Report:
    """Certify a Cauchy/Littlewood identity as a polynomial identity.

    Each ``t^k`` coefficient of (left side - right side) is a polynomial in
    the variables of degree at most ``degree_bound`` in each variable, so it
    vanishes identically once it vanishes on ``S^r`` for a set ``S`` of more
    than that many points.  Both sides are symmetric (separately in ``x`` and
    ``y`` for Cauchy), so it is enough to test one point per multiset.
    """
    if identity not in IDENTITIES:
        raise InvariantViolation(f"unknown identity {identity!r}; expected one of {IDENTITIES}", "identity")
    if identity == "cauchy" and p is None:
        p = r
    bound = degree_bound(identity, order)
    if grid is None:
        if seed is not None:
            rng = random.Random(seed)
            pts: set = set()
            while len(pts) < bound + 1:
                pts.add(Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            grid = sorted(pts)
        else:
            grid = list(range(1, bound + 2))
    pts = sorted(set(Fraction(g) for g in grid))
    if len(pts) <= bound:
        raise InsufficientGrid(
            f"{identity} to order {order} has degree {bound} per variable; "
            f"the grid has only {len(pts)} distinct points"
        )
    pts = [int(g) if g.denominator == 1 else g for g in pts]
    label = name or f"certify-{identity}-r{r}" + (f"-p{p}" if identity == "cauchy" else "") + f"-N{order}"
    report = Report(label, "certify", False, toolchain=toolchain())
    checks = {"identity": identity, "degree_bound": bound, "grid_size": len(pts), "order": order}

    evaluated = 0
    mismatch = None
    if identity == "cauchy":
        width = min(r, p)
        terms = _lhs_terms(identity, width, order)
        xs = [(x, _schur_side(terms, x, order)) for x in combinations_with_replacement(pts, r)]
        ys = xs if p == r else [(y, _schur_side(terms, y, order)) for y in combinations_with_replacement(pts, p)]
        for x, sx in xs:
            for y, sy in ys:
                lhs = [0] * (order + 1)
                for (lam, k, a), (_, _, b) in zip(sx, sy):
                    lhs[k] += a * b
                rhs = expand_factor_product(_rhs_factors(identity, x, y), order)
                evaluated += 1
                for k in range(order + 1):
                    if lhs[k] != rhs[k]:
                        mismatch = {"point": [[_scalar(v) for v in x], [_scalar(v) for v in y]],
                                    "degree": k, "computed": _scalar(lhs[k]), "expected": _scalar(rhs[k])}
                        break
                if mismatch:
                    break
            if mismatch:
                break
    else:
        terms = _lhs_terms(identity, r, order)
        for x in combinations_with_replacement(pts, r):
            lhs = [0] * (order + 1)
            for lam, k, v in _schur_side(terms, x, order):
                lhs[k] += v
            rhs = expand_factor_product(_rhs_factors(identity, x), order)
            evaluated += 1
            k = next((k for k in range(order + 1) if lhs[k] != rhs[k]), None)
            if k is not None:
                mismatch = {"point": [_scalar(v) for v in x], "degree": k,
                            "computed": _scalar(lhs[k]), "expected": _scalar(rhs[k])}
                break
    checks["points_evaluated"] = evaluated
    report.checks = {"certificate": dict(checks, passed=mismatch is None)}
    report.first_mismatch = mismatch
    report.passed = mismatch is None
    return report
