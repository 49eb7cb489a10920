"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 mathematical precondition failure (pole, divergence, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .algebra import format_scalar, scalar_to_json
from .errors import ConfigError, MathPreconditionError, PeriodsError, SchemaError
from .lfactors import KINDS as LFACTOR_KINDS
from .periods import DEFAULT_ORDER, KINDS as PERIOD_KINDS
from .periods import expected_lfactor, lattice_sum, special_value
from .reps import DEFAULT_Q, parse_rational, parse_spec
from .verify import (
    IDENTITIES,
    grid_certify,
    load_scenarios,
    load_suite,
    run_suite,
)
from .whittaker import essential_value, spherical_value

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MATH = 0, 1, 2, 3


def _read_spec(path: str, q: int):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path) from None
    try:
        return parse_spec(text, default_q=q)
    except ConfigError as exc:
        raise type(exc)(str(exc), path) from None


def _specs(args) -> list:
    return [_read_spec(p, args.q) for p in args.config]


def _emit(args, human: Sequence[str], machine: dict):
    if args.format == "json":
        print(json.dumps(machine, sort_keys=True))
    else:
        for line in human:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_lfactor(args) -> int:
    specs = _specs(args)
    kind = args.kind
    if kind == "rs":
        if len(specs) != 2:
            raise ConfigError("--kind rs needs two --config files")
        lf = LFACTOR_KINDS["rs"](specs[0].unramified_part, specs[1].unramified_part)
    else:
        if len(specs) != 1:
            raise ConfigError(f"--kind {kind} needs exactly one --config file")
        pi = specs[0]
        if kind == "asai":
            if pi.extension is None:
                raise ConfigError("--kind asai needs an \"extension\" entry in the config")
            lf = LFACTOR_KINDS["asai"](pi.unramified_part, pi.extension)
        else:
            lf = LFACTOR_KINDS[kind](pi.unramified_part)
    var = "u" if kind == "asai" else "t"
    den = str(lf).replace("t", var)
    human = [f"denominator: {den}"]
    evals = []
    status = EXIT_OK
    for raw in args.eval or []:
        t0 = parse_rational(raw, "--eval")
        try:
            v = lf.evaluate(t0)
            evals.append({"point": str(t0), "value": scalar_to_json(v)})
            human.append(f"{var} = {t0}: {format_scalar(v)}")
        except MathPreconditionError as exc:
            evals.append({"point": str(t0), "pole": str(exc)})
            human.append(f"{var} = {t0}: pole ({exc})")
            status = EXIT_MATH
    _emit(args, human, {"kind": kind, "variable": var, **lf.to_json(), "evaluations": evals})
    return status


def cmd_whittaker(args) -> int:
    if len(args.config) != 1:
        raise ConfigError("whittaker needs exactly one --config file")
    (spec,) = _specs(args)
    try:
        lam = tuple(int(p) for p in args.weight.split(",")) if args.weight.strip() else ()
    except ValueError:
        raise ConfigError(f"weight must be comma-separated integers, got {args.weight!r}") from None
    if args.spherical:
        if len(lam) != spec.r:
            raise ConfigError(f"spherical weight needs {spec.r} entries, got {len(lam)}")
        val = spherical_value(spec.unramified_part, lam)
        what = "spherical"
    else:
        if len(lam) != spec.rank - 1:
            raise ConfigError(f"essential weight needs {spec.rank - 1} entries, got {len(lam)}")
        val = essential_value(spec, lam)
        what = "essential"
    _emit(
        args,
        [f"{what} W({', '.join(map(str, lam))}) = {format_scalar(val)}"],
        {"function": what, "weight": list(lam), "value": scalar_to_json(val)},
    )
    return EXIT_OK


def cmd_period(args) -> int:
    specs = _specs(args)
    ps = lattice_sum(args.kind, specs, args.order)
    lf = expected_lfactor(args.kind, specs)
    exp = lf.series(args.order)
    k = ps.series.first_mismatch(exp)
    human = [f"t^{i}: {format_scalar(c)}" for i, c in enumerate(ps.series.coeffs)]
    if k is None:
        human.append(f"PASS: equals the expansion of 1/[{lf}] to order {args.order}")
    else:
        human.append(
            f"FAIL: first mismatch at t^{k}: computed {format_scalar(ps.series[k])}, "
            f"expected {format_scalar(exp[k])}"
        )
    machine = {
        "kind": args.kind,
        "order": args.order,
        "coefficients": [scalar_to_json(c) for c in ps.series.coeffs],
        "expected": lf.to_json(),
        "passed": k is None,
        "first_mismatch": k,
    }
    _emit(args, human, machine)
    return EXIT_OK if k is None else EXIT_FAIL


def cmd_special(args) -> int:
    specs = _specs(args)
    sv = special_value(args.kind, specs, integral=args.integral, cross_check=args.cross_check)
    if args.branch != "auto" and args.branch != sv.branch:
        raise ConfigError(f"--branch {args.branch} requested but the inputs give the {sv.branch} branch")
    human = [
        f"{sv.label} = {format_scalar(sv.value)}",
        f"branch: {sv.branch}",
        f"special point: {format_scalar(sv.point)}",
        f"correction divisor: {format_scalar(sv.correction_divisor)}",
    ]
    machine = {
        "kind": args.kind,
        "value": scalar_to_json(sv.value),
        "correction_divisor": scalar_to_json(sv.correction_divisor),
        "branch": sv.branch,
        "label": sv.label,
        "point": scalar_to_json(sv.point),
    }
    status = EXIT_OK
    if sv.cross_check is not None:
        cc = sv.cross_check
        human.append(
            f"numeric cross-check (floating point, informational): {cc.terms} terms, "
            f"|difference| = {cc.difference:.3e}, tail bound {cc.tail_bound:.3e}, "
            f"{'ok' if cc.passed else 'NOT within tolerance'}"
        )
        machine["cross_check"] = {
            "terms": cc.terms,
            "difference": cc.difference,
            "tail_bound": cc.tail_bound,
            "passed": cc.passed,
        }
    _emit(args, human, machine)
    return status


def cmd_verify(args) -> int:
    if bool(args.suite) == bool(args.scenario):
        raise ConfigError("give exactly one of --suite or --scenario")
    if args.suite:
        scenarios = load_suite(args.suite)
    else:
        try:
            with open(args.scenario, encoding="utf-8") as fh:
                obj = json.loads(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read scenario: {exc.strerror}", args.scenario) from None
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}", args.scenario) from None
        scenarios = load_scenarios(obj)
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    result = run_suite(scenarios, jobs=args.jobs, include_timing=args.timing)
    lines = result.lines()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    if args.format == "json":
        for line in lines:
            print(line)
    else:
        for r in result.reports:
            status = "PASS" if r.passed else ("ERROR" if r.error else "FAIL")
            extra = ""
            if r.error:
                extra = f" [{r.error['type']}: {r.error['message']}]"
            elif r.first_mismatch:
                m = r.first_mismatch
                extra = f" [t^{m['degree']}: computed {m['computed']}, expected {m['expected']}]"
            print(f"{status} {r.scenario}{extra}")
        print(result.summary["summary"])
    return result.exit_code


def cmd_certify(args) -> int:
    grid = None
    if args.grid:
        grid = [parse_rational(g, "--grid") for g in args.grid.split(",")]
    report = grid_certify(args.identity, args.r, args.order, p=args.p, grid=grid)
    if args.format == "json":
        print(report.line())
    else:
        c = report.checks["certificate"]
        print(
            f"{'PASS' if report.passed else 'FAIL'} {report.scenario}: "
            f"{c['points_evaluated']} points, grid of {c['grid_size']}, degree bound {c['degree_bound']}"
        )
        if report.first_mismatch:
            print(f"first mismatch: {report.first_mismatch}")
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=DEFAULT_Q,
                        help=f"residue field size for configs without a field entry (default {DEFAULT_Q})")
    common.add_argument("--format", choices=("human", "json"), default="human")

    parser = argparse.ArgumentParser(
        prog="newform-periods",
        description="Exact local L-factors, newform Whittaker values and period lattice sums.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lfactor", parents=[common], help="print a formal L-factor")
    p.add_argument("--kind", choices=sorted(LFACTOR_KINDS), required=True)
    p.add_argument("--config", action="append", required=True, help="spec file (twice for rs)")
    p.add_argument("--eval", action="append", metavar="T0", help="evaluate at this point (repeatable)")
    p.set_defaults(func=cmd_lfactor)

    p = sub.add_parser("whittaker", parents=[common], help="Whittaker value on the torus")
    p.add_argument("--config", action="append", required=True)
    p.add_argument("--weight", required=True, help="comma-separated valuations, e.g. 2,0")
    p.add_argument("--spherical", action="store_true",
                   help="spherical function of the unramified part (weight of length r)")
    p.set_defaults(func=cmd_whittaker)

    p = sub.add_parser("period", parents=[common], help="lattice-sum series vs the L-factor")
    p.add_argument("--kind", choices=PERIOD_KINDS, required=True)
    p.add_argument("--config", action="append", required=True)
    p.add_argument("--order", type=int, default=DEFAULT_ORDER)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("special", parents=[common], help="exact special value of a period")
    p.add_argument("--kind", choices=PERIOD_KINDS, required=True)
    p.add_argument("--config", action="append", required=True)
    p.add_argument("--branch", choices=("auto", "ramified", "unramified"), default="auto",
                   help="assert which branch applies")
    p.add_argument("--integral", choices=("mirabolic", "full"), default="mirabolic")
    p.add_argument("--cross-check", action="store_true",
                   help="also compare with exact partial sums in floating point")
    p.set_defaults(func=cmd_special)

    p = sub.add_parser("verify", parents=[common], help="run verification scenarios")
    p.add_argument("--suite")
    p.add_argument("--scenario")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the JSON-lines report here")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", parents=[common], help="certify a Cauchy/Littlewood identity on a grid")
    p.add_argument("--identity", choices=IDENTITIES, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--grid", help="comma-separated rationals (default 1..bound+1)")
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MathPreconditionError as exc:
        msg = str(exc)
        factor = getattr(exc, "factor", None)
        if factor and factor not in msg:
            msg += f" (factor {factor})"
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_MATH
    except (ConfigError, PeriodsError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
