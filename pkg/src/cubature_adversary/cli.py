"""Command-line front end. Every run prints one JSON object
``{"schema": 1, "subcommand": ..., "config": ..., "result": ...}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import bounds, geometry
from .errors import InputError
from .estimate import (DEFAULT_INNER_SAMPLES, DEFAULT_INTEGRAL_SAMPLES, DEFAULT_MEASURE_SAMPLES, attack)
from .fooling import FoolingFunction, SmoothingSchedule
from .rules import RuleSpec, load_points, save_points
from . import verify as checks

SCHEMA_VERSION = 1

EXIT_OK, EXIT_INPUT, EXIT_CHECK_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _flag_error(flag, message):
    return UsageError(f"{flag}: {message}")


def _require(value, flag, ok, message):
    if value is None:
        raise _flag_error(flag, "is required here")
    if not ok(value):
        raise _flag_error(flag, message)
    return value


def _clean(obj):
    """Replace non-finite floats by null so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def build_parser():
    p = _Parser(prog="cubature-adversary",
                description="Fooling functions and worst-case error lower bounds for cubature rules.")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="closed-form lower bounds")
    b.add_argument("--formula", required=True, choices=["thm2", "thm3", "corollary", "sukharev", "certificate", "d0"])
    b.add_argument("--d", type=int)
    b.add_argument("--r", type=int, default=1)
    b.add_argument("--delta", type=float, default=0.05)
    b.add_argument("--eps", type=float, default=0.5)
    b.add_argument("--p", type=float)
    b.add_argument("--n", type=int)
    b.add_argument("--log-space", action="store_true", help="report only the natural log")
    b.add_argument("--format", choices=["json", "csv"], default="json")

    a = sub.add_parser("attack", help="certify error lower bounds for a node set")
    src = a.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", metavar="FILE")
    src.add_argument("--rule", help="midpoint:m or random:n")
    a.add_argument("--d", type=int)
    a.add_argument("--r", type=int, default=1)
    a.add_argument("--delta", type=float, default=0.05)
    a.add_argument("--samples-measure", type=int, default=DEFAULT_MEASURE_SAMPLES)
    a.add_argument("--samples-integral", type=int, default=DEFAULT_INTEGRAL_SAMPLES)
    a.add_argument("--inner-samples", type=int, default=DEFAULT_INNER_SAMPLES)
    a.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="statistical checks of the smoothing properties")
    v.add_argument("--suite", required=True, choices=["conv", "class", "tilde"])
    v.add_argument("--d", type=int, default=2)
    v.add_argument("--r", type=int, default=1)
    v.add_argument("--delta", type=float, default=0.05)
    v.add_argument("--p", type=float)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=100, help="trials per check")
    v.add_argument("--rule", default="random:8", help="node set: midpoint:m or random:n")
    v.add_argument("--inner-samples", type=int, default=50_000)
    v.add_argument("--format", choices=["json", "csv"], default="json")

    g = sub.add_parser("gen", help="write a node set to CSV")
    g.add_argument("--rule", required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, metavar="FILE")

    o = sub.add_parser("volume", help="ball volumes and the volume bounds")
    o.add_argument("--d", type=int, required=True)
    o.add_argument("--delta", type=float, default=0.05)
    o.add_argument("--format", choices=["json", "csv"], default="json")
    return p


def _pos(v):
    return v >= 1


def _check_seed(args):
    _require(args.seed, "--seed", lambda s: 0 <= s < 2 ** 64, "must be a 64-bit unsigned integer")


def _check_delta(args):
    _require(args.delta, "--delta", lambda x: 0 < x <= 1, "must lie in (0, 1]")


def cmd_bound(args):
    f = args.formula
    cfg = {"formula": f, "log_space": args.log_space}
    if f != "d0":
        cfg["d"] = _require(args.d, "--d", _pos, "must be a positive integer")
    if f in ("thm2", "thm3", "corollary"):
        cfg["eps"] = _require(args.eps, "--eps", lambda x: 0 < x < 1, "must lie in (0, 1)")
    if f in ("thm2", "certificate"):
        _check_delta(args)
        cfg["delta"] = args.delta
    if f in ("thm3", "corollary", "d0"):
        cfg["r"] = _require(args.r, "--r", _pos, "must be a positive integer")
    if f in ("thm3", "d0"):
        cfg["p"] = _require(args.p, "--p", lambda x: x > 0 and (f != "d0" or x < 0.5),
                            "must be positive" + (" and below 1/2" if f == "d0" else ""))
    if f in ("sukharev", "certificate"):
        cfg["n"] = _require(args.n, "--n", _pos, "must be a positive integer")
    if f == "certificate" and cfg["d"] < 2:
        raise _flag_error("--d", "the certificate needs d >= 2")

    if f == "thm2":
        rep = bounds.min_points_thm2(cfg["eps"], cfg["d"], cfg["delta"])
    elif f == "thm3":
        rep = bounds.min_points_thm3(cfg["eps"], cfg["d"], cfg["r"], cfg["p"])
    elif f == "corollary":
        rep = bounds.corollary_bound(cfg["eps"], cfg["d"], cfg["r"])
    elif f == "sukharev":
        rep = bounds.sukharev_report(cfg["d"], cfg["n"])
    elif f == "certificate":
        rep = bounds.certificate_report(cfg["n"], cfg["d"], cfg["delta"])
    else:
        rep = bounds.d0_threshold(cfg["r"], cfg["p"])
    result = rep.to_dict()
    if args.log_space:
        result["value"] = None
    return cfg, result, EXIT_OK


def _nodes(args):
    if getattr(args, "points", None):
        P = load_points(args.points)
        if args.d is not None and args.d != P.d:
            raise _flag_error("--d", f"file holds {P.d}-dimensional points")
        return P, {"points": args.points}
    d = _require(args.d, "--d", _pos, "must be a positive integer")
    try:
        spec = RuleSpec.parse(args.rule, d, args.seed)
    except InputError as exc:
        raise _flag_error("--rule", str(exc)) from None
    return spec.build(), {"rule": args.rule}


def cmd_attack(args):
    _check_seed(args)
    _check_delta(args)
    _require(args.r, "--r", _pos, "must be a positive integer")
    for flag in ("samples_measure", "samples_integral"):
        _require(getattr(args, flag), "--" + flag.replace("_", "-"), lambda m: m >= 2, "must be at least 2")
    _require(args.inner_samples, "--inner-samples", _pos, "must be a positive integer")
    P, src = _nodes(args)
    if P.d < 2:
        raise _flag_error("--d", "attack needs d >= 2")
    cfg = {**src, "d": P.d, "n": P.n, "r": args.r, "delta": args.delta,
           "samples_measure": args.samples_measure, "samples_integral": args.samples_integral,
           "inner_samples": args.inner_samples, "seed": args.seed}
    rep = attack(P, args.r, args.delta, args.samples_measure, args.samples_integral, args.inner_samples, args.seed)
    return cfg, rep.to_dict(), EXIT_OK


def cmd_verify(args):
    _check_seed(args)
    d = _require(args.d, "--d", lambda x: x >= 2, "must be at least 2")
    r = _require(args.r, "--r", _pos, "must be a positive integer")
    budget = _require(args.budget, "--budget", _pos, "must be a positive integer")
    inner = _require(args.inner_samples, "--inner-samples", _pos, "must be a positive integer")
    if args.suite == "tilde":
        p = _require(args.p, "--p", lambda x: x > 0, "must be positive")
        delta = bounds.delta_for_p(d, r, p)
    else:
        _check_delta(args)
        p, delta = args.p, args.delta
    P, src = _nodes(args)
    cfg = {"suite": args.suite, **src, "d": d, "n": P.n, "r": r, "delta": delta, "p": p,
           "budget": budget, "inner_samples": inner, "seed": args.seed}
    # cheap checks use a tenth of the inner samples
    light = max(1, inner // 10)
    sched = SmoothingSchedule(delta, r)
    F = FoolingFunction(P, sched, light, args.seed)
    if args.suite == "conv":
        out = [
            checks.check_vanishing(F, budget, args.seed),
            checks.check_lip(F, budget, args.seed),
            checks.check_integral(F, max(2, budget * 100), args.seed),
            checks.check_constant_integral(0.3, d, sched, max(2, budget * 10), 10, args.seed),
            checks.check_smooth_base([3.0] + [1.0] * (d - 1), sched, budget, seed=args.seed, samples=light),
        ]
        for k in range(1, r + 1):
            out.append(checks.check_derivative_lip(F, k, budget, seed=args.seed, samples=inner))
    else:
        F = FoolingFunction(P, sched, inner, args.seed)
        out = checks.check_class_membership(F, budget, args.seed, p if args.suite == "tilde" else None)
    code = EXIT_CHECK_FAILED if any(o.failed for o in out) else EXIT_OK
    return cfg, [o.to_dict() for o in out], code


def cmd_gen(args):
    _check_seed(args)
    P, src = _nodes(args)
    save_points(P, args.out)
    return {**src, "d": P.d, "seed": args.seed, "out": args.out}, {"path": args.out, "n": P.n, "d": P.d}, EXIT_OK


def cmd_volume(args):
    d = _require(args.d, "--d", _pos, "must be a positive integer")
    _check_delta(args)
    R = args.delta * math.sqrt(d)
    log_v = geometry.ball_volume(d, R, log_space=True)
    log_ub = geometry.ball_volume_upper_bound(d, args.delta, log_space=True)
    log_unit = geometry.log_unit_ball_volume(d)
    def linear(log_x):
        return math.exp(log_x) if log_x <= bounds.LOG_OVERFLOW else None

    result = {
        "log_unit_ball_volume": log_unit,
        "unit_ball_volume": linear(log_unit),
        "radius": R,
        "log_ball_volume": log_v,
        "ball_volume": linear(log_v),
        "log_upper_bound": log_ub,
        "upper_bound": linear(log_ub),
        "bound_holds": log_v < log_ub,
        "slice_ratio": geometry.slice_ratio(d) if d >= 2 else None,
    }
    return {"d": d, "delta": args.delta}, result, EXIT_OK


COMMANDS = {"bound": cmd_bound, "attack": cmd_attack, "verify": cmd_verify, "gen": cmd_gen, "volume": cmd_volume}


def _to_csv(result):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(result, list):
        keys = list(result[0].keys())
        w.writerow(keys)
        for row in result:
            w.writerow(["" if row[k] is None else row[k] for k in keys])
    else:
        w.writerow(["key", "value"])
        for k, v in result.items():
            w.writerow([k, "" if v is None else (json.dumps(v, sort_keys=True) if isinstance(v, dict) else v)])
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        cfg, result, code = COMMANDS[args.subcommand](args)
    except (UsageError, InputError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    result = _clean(result)
    if getattr(args, "format", "json") == "csv":
        stdout.write(_to_csv(result))
    else:
        report = {"schema": SCHEMA_VERSION, "subcommand": args.subcommand, "config": _clean(cfg), "result": result}
        stdout.write(json.dumps(report, indent=2, allow_nan=False) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
