"""The ``gaugeworks`` command line.

Exit status 0 when every check passes, 1 when a check fails, 2 on bad input.
Reports are JSON with exact "p/q" rationals; only fields ending in
``_float`` hold floating point numbers.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import serialize as ser
from .balanced_cantor import (BuildError, LevelSystem, TooLarge, auto_schedule, build_system,
                              certify_system, natural_gauge)
from .convolve import CapExceeded, pigeonhole_translates, pushforward_sum
from .digit_groups import (BaseSystem, DigitError, DigitSetSpec, DigitVector, HalfSum, LpBall,
                           demo_components, greedy_sidon, membership, rigidity_check,
                           translate_pipeline, uniqueness_check)
from .exactcore import Certificate, InputError, fmt, to_rational
from .gauge import Gauge, eval_gauge
from .hausdorff_bounds import (BoxRow, NodeLimitExceeded, box_counting, davies_box_table,
                               mass_distribution_check, net_measure_dp)
from .incomparable import (ScheduleError, assemble_partition, reverify, schedule_inequalities,
                           schedule_scales, verify_null)
from .serialize import to_json


class CheckFailed(Exception):
    pass


def threads() -> int:
    """GAUGEWORKS_THREADS (0 = auto). Runs are sequential; the value is validated and echoed."""
    raw = os.environ.get("GAUGEWORKS_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"not an integer: {raw!r}", "GAUGEWORKS_THREADS") from None
    if n < 0:
        raise InputError("must be >= 0", "GAUGEWORKS_THREADS")
    return n


def _ints(text: str, where: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}", where) from None


def _positive(text: str) -> int:
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _check(c: Certificate) -> dict:
    return to_json(c)


def _bound_json(b) -> dict:
    witness = None
    if b.witnesses:
        I, info = b.witnesses[0]
        witness = {"interval": ser.interval_json(I), **to_json(info)}
    return {"pass": b.passed, "lower": fmt(b.lower), "upper": fmt(b.upper), "depth": b.depth,
            "checked": b.checked, "witness": witness, "details": to_json(b.details)}


def _load_gauge(path: str | None, system: LevelSystem | None) -> Gauge:
    if path:
        return ser.gauge_from(ser.read_json(path), path)
    return natural_gauge(system)


# ---------------------------------------------------------------- commands

def cmd_construct_balanced(args) -> dict:
    model = ser.model_from(ser.read_json(args.model), args.model)
    if args.schedule:
        system = build_system(model, _ints(args.schedule, "--schedule"), args.depth,
                              args.cap_enum)
    else:
        system = auto_schedule(model, args.depth, args.m1)
    if args.out:
        ser.write_json(args.out, ser.system_json(system))
    checks = [_check(c) for c in certify_system(system, est=True)]
    return {"checks": checks, "m": [lv.m for lv in system.levels],
            "sizes": [system.size(k) for k in range(1, system.depth + 1)]}


def cmd_construct_incomparable(args) -> dict:
    model = ser.model_from(ser.read_json(args.model), args.model)
    cover = ser.cover_from(ser.read_json(args.cover), args.cover)
    sched = schedule_scales(model, cover, args.depth, self_cover=args.self_cover,
                            cap_doublings=args.cap_doublings)
    if args.out:
        ser.write_json(args.out, ser.schedule_json(sched))
    return {"checks": [_check(c) for c in sched.certificates], "m1": sched.m1, "m2": sched.m2,
            "doublings": sched.doublings}


def cmd_verify_mass(args) -> dict:
    system = ser.system_from(ser.read_json(args.system), args.system)
    g = _load_gauge(args.gauge, system)
    b = mass_distribution_check(system, g, args.factor, random_count=args.random, seed=args.seed)
    return {"check": "mass_distribution", "seed": args.seed, **_bound_json(b),
            "checks": [{"name": "mass_distribution", "pass": b.passed}]}


def cmd_verify_null(args) -> dict:
    sched = ser.schedule_from(ser.read_json(args.schedule), args.schedule)
    cover = None
    if args.cover:
        cover = ser.cover_from(ser.read_json(args.cover), args.cover,
                               {"F1": sched.systems[0], "F2": sched.systems[1]})
    cert = verify_null(sched, cover)
    again = reverify(sched, cover)
    checks = [{"name": "null_bands", "pass": cert.passed,
               "witness": to_json(list(cert.violation)) if cert.violation else None}]
    checks += [_check(c) for c in cert.consistency]
    checks += [_check(c) for c in again]
    return {"checks": checks,
            "sums": [{"k": k, "band1": fmt(a), "band2": fmt(b), "bound": fmt(bd)}
                     for (k, a, b), bd in zip(cert.sums, cert.bounds)],
            "tails": [{"n": n, "actual": fmt(a), "bound": fmt(b)} for n, a, b in cert.tails],
            "unbanded": fmt(cert.unbanded)}


def cmd_verify_net(args) -> dict:
    system = ser.system_from(ser.read_json(args.system), args.system)
    g = _load_gauge(args.gauge, system)
    max_diam = to_rational(args.max_diam, "--max-diam") if args.max_diam else system.r(1)
    value = net_measure_dp(system, g, max_diam, args.cap_nodes)
    return {"checks": [{"name": "net_measure", "pass": True}], "value": fmt(value)}


def cmd_partition(args) -> dict:
    model = ser.model_from(ser.read_json(args.model), args.model)
    cover = ser.cover_from(ser.read_json(args.cover), args.cover) if args.cover else None
    from .incomparable import NullCover

    rep = assemble_partition(model, cover or NullCover(), args.depth, seed=args.seed,
                             random_count=args.random, self_apply=args.self_apply)
    checks = [_check(c) for c in rep.certificates.values()]
    checks.append({"name": "null_bands", "pass": rep.null.passed})
    checks += [{"name": f"bracket_system_{i}", "pass": b.passed}
               for i, b in enumerate(rep.brackets, start=1)]
    labels = sorted(((kind, fmt(x), v) for (kind, x), v in rep.labels.items()))
    return {"checks": checks, "horizon": rep.horizon,
            "factors": [fmt(f) for f in rep.factors],
            "brackets": [_bound_json(b) for b in rep.brackets],
            "labels": [{"set": kind, "x": x, "class": v} for kind, x, v in labels],
            "note": f"limsup classes are finite-horizon approximations (horizon {rep.horizon})"}


def _bases(text: str) -> BaseSystem:
    if Path(text).suffix == ".json" or Path(text).exists():
        return ser.bases_from(ser.read_json(text), text)
    return BaseSystem(tuple(_ints(text, "--bases")))


def _constraint(text: str):
    if text == "half_sum":
        return HalfSum()
    if text == "none":
        return None
    if text.startswith("lp:"):
        parts = text[3:].split(",")
        if len(parts) not in (2, 3):
            raise InputError("expected lp:p,radius[,C]", "--constraint")
        vals = [to_rational(x, "--constraint") for x in parts]
        return LpBall(*vals)
    raise InputError(f"unknown constraint {text!r}", "--constraint")


def cmd_digits_membership(args) -> dict:
    spec = DigitSetSpec(_bases(args.bases), _constraint(args.constraint))
    v = DigitVector(tuple(_ints(args.digits, "--digits")))
    ok, cert = membership(spec, v)
    return {"checks": [_check(cert)], "member": ok}


def cmd_digits_perfect(args) -> dict:
    base = _bases(args.bases)
    spec = DigitSetSpec(base)
    comps = demo_components(spec, _ints(args.sizes, "--sizes"), args.component_depth, args.seed)
    pipe = translate_pipeline(spec, comps, args.levels)
    checks = [_check(c) for c in pipe.certificates]
    checks += [{"name": "translate_pair", "p": list(p), "q": list(q), "pass": c.passed,
                "values": to_json(c.values)} for p, q, c in pipe.pairs]
    return {"checks": checks, "positions": list(pipe.P.positions),
            "amplitudes": list(pipe.P.amplitudes), "pairs": len(pipe.pairs)}


def cmd_digits_boxdim(args) -> dict:
    if not args.davies:
        raise InputError("only the Davies variant is supported here", "--davies")
    rows = davies_box_table(args.depth)
    if args.csv:
        write_box_csv(rows, args.csv)
    ratios = [r.ratio for r in rows]
    dec = all(b < a for a, b in zip(ratios[2:], ratios[3:]))
    return {"checks": [{"name": "ratio_decreasing_from_3", "pass": dec}],
            "rows": [{"delta": fmt(r.delta), "count": r.count, "ratio_float": r.ratio}
                     for r in rows]}


def cmd_digits_uniqueness(args) -> dict:
    base = _bases(args.bases)
    bounds = _ints(args.bounds, "--bounds")
    depth = args.depth if args.depth is not None else len(bounds)
    return {"checks": [_check(uniqueness_check(base, bounds, depth, args.cap_enum))]}


def cmd_digits_sidon(args) -> dict:
    seq = greedy_sidon(args.count)
    checks = []
    for i in range(1, len(seq) + 1):
        ok, wit = rigidity_check(seq[:i])
        checks.append({"name": f"rigidity_prefix_{i}", "pass": ok, "witness": to_json(wit)})
    return {"checks": checks, "sequence": seq}


def cmd_convolve(args) -> dict:
    measures = [ser.measure_from(ser.read_json(p), p) for p in args.measures]
    mu = pushforward_sum(measures, args.cap_enum)
    if args.out:
        ser.write_json(args.out, ser.measure_json(mu))
    expected = Fraction(1)
    for m in measures:
        expected *= m.mass
    return {"checks": [{"name": "mass_conservation", "pass": mu.mass == expected,
                        "values": {"mass": fmt(mu.mass), "expected": fmt(expected)}}],
            "measure": ser.measure_json(mu)}


def cmd_export_csv(args) -> dict:
    if args.gauge:
        g = ser.gauge_from(ser.read_json(args.gauge), args.gauge)
        write_gauge_csv(g, args.out, args.samples)
    elif args.davies:
        write_box_csv(davies_box_table(args.depth), args.out)
    elif args.system:
        system = ser.system_from(ser.read_json(args.system), args.system)
        scales = [to_rational(x, "--scales") for x in args.scales.split(",")]
        write_box_csv(box_counting(system, scales), args.out)
    else:
        write_box_csv([], args.out)
    return {"checks": [{"name": "export", "pass": True}], "path": args.out}


def write_gauge_csv(g: Gauge, path: str, samples: int = 0) -> None:
    """Breakpoint rows (exact strings plus floats), then optional dense samples."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "x_float", "y_float"])
        for x, y in sorted(g.breakpoints):
            w.writerow([fmt(x), fmt(y), float(x), float(y)])
        for i in range(1, samples + 1):
            x = g.x_max * Fraction(i, samples)
            y = eval_gauge(g, x)
            w.writerow([fmt(x), fmt(y), float(x), float(y)])


def write_box_csv(rows: Sequence[BoxRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["delta", "count", "ratio_float"])
        for r in rows:
            w.writerow([fmt(r.delta), r.count, "" if r.ratio is None else repr(r.ratio)])


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaugeworks", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    def common(q, report=True):
        q.add_argument("--seed", type=int, default=0)
        if report:
            q.add_argument("--report", help="write the JSON report here")
        q.add_argument("--cap-nodes", type=_positive, default=10**5)
        q.add_argument("--cap-enum", type=_positive, default=10**6)

    con = sub.add_parser("construct").add_subparsers(dest="cmd", required=True)
    q = con.add_parser("balanced")
    q.add_argument("--model", required=True)
    q.add_argument("--schedule", help="comma-separated m values; omit for automatic doubling")
    q.add_argument("--depth", type=_positive, required=True)
    q.add_argument("--m1", type=_positive, default=4)
    q.add_argument("--out")
    common(q)
    q.set_defaults(func=cmd_construct_balanced)
    q = con.add_parser("incomparable")
    q.add_argument("--model", required=True)
    q.add_argument("--cover", required=True)
    q.add_argument("--depth", type=_positive, required=True)
    q.add_argument("--self-cover", action="store_true")
    q.add_argument("--cap-doublings", type=_positive, default=2**64)
    q.add_argument("--out")
    common(q)
    q.set_defaults(func=cmd_construct_incomparable)

    ver = sub.add_parser("verify").add_subparsers(dest="cmd", required=True)
    q = ver.add_parser("mass")
    q.add_argument("--system", required=True)
    q.add_argument("--gauge")
    q.add_argument("--factor", type=lambda s: to_rational(s, "--factor"), default=Fraction(8))
    q.add_argument("--random", type=int, default=0)
    common(q)
    q.set_defaults(func=cmd_verify_mass)
    q = ver.add_parser("null")
    q.add_argument("--schedule", required=True)
    q.add_argument("--cover")
    common(q)
    q.set_defaults(func=cmd_verify_null)
    q = ver.add_parser("net")
    q.add_argument("--system", required=True)
    q.add_argument("--gauge")
    q.add_argument("--max-diam")
    common(q)
    q.set_defaults(func=cmd_verify_net)

    q = sub.add_parser("partition")
    q.add_argument("--model", required=True)
    q.add_argument("--cover")
    q.add_argument("--depth", type=_positive, required=True)
    q.add_argument("--horizon", type=_positive, help="accepted for symmetry; equals depth")
    q.add_argument("--random", type=int, default=1000)
    q.add_argument("--self-apply", action="store_true")
    common(q)
    q.set_defaults(func=cmd_partition)

    dig = sub.add_parser("digits").add_subparsers(dest="cmd", required=True)
    q = dig.add_parser("membership")
    q.add_argument("--bases", required=True)
    q.add_argument("--constraint", default="half_sum")
    q.add_argument("--digits", required=True)
    common(q)
    q.set_defaults(func=cmd_digits_membership)
    q = dig.add_parser("perfect")
    q.add_argument("--bases", required=True)
    q.add_argument("--levels", type=int, default=3)
    q.add_argument("--sizes", default="4,4")
    q.add_argument("--component-depth", type=_positive)
    common(q)
    q.set_defaults(func=cmd_digits_perfect)
    q = dig.add_parser("boxdim")
    q.add_argument("--davies", action="store_true")
    q.add_argument("--depth", type=_positive, default=8)
    q.add_argument("--csv")
    common(q)
    q.set_defaults(func=cmd_digits_boxdim)
    q = dig.add_parser("uniqueness")
    q.add_argument("--bases", required=True)
    q.add_argument("--bounds", required=True)
    q.add_argument("--depth", type=int)
    common(q)
    q.set_defaults(func=cmd_digits_uniqueness)
    q = dig.add_parser("sidon")
    q.add_argument("--count", type=_positive, required=True)
    common(q)
    q.set_defaults(func=cmd_digits_sidon)

    q = sub.add_parser("convolve")
    q.add_argument("--measures", nargs="+", required=True)
    q.add_argument("--out")
    common(q)
    q.set_defaults(func=cmd_convolve)

    exp = sub.add_parser("export").add_subparsers(dest="cmd", required=True)
    q = exp.add_parser("csv")
    src = q.add_mutually_exclusive_group()
    src.add_argument("--gauge")
    src.add_argument("--davies", action="store_true")
    src.add_argument("--system")
    q.add_argument("--depth", type=_positive, default=8)
    q.add_argument("--scales", default="1/2,1/4,1/8")
    q.add_argument("--samples", type=int, default=0)
    q.add_argument("--out", required=True)
    common(q, report=False)
    q.add_argument("--report")
    q.set_defaults(func=cmd_export_csv)
    return p


# constructions that ran on valid input but could not finish
FAILURES = (BuildError, TooLarge, CapExceeded, NodeLimitExceeded)


def _config(args) -> dict:
    skip = {"func"}
    return {k: to_json(v) if not isinstance(v, int) or isinstance(v, bool) else v
            for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = f"{args.group} {getattr(args, 'cmd', '') or ''}".strip()
    start = time.perf_counter()
    report: dict[str, Any] = {"command": command, "config": _config(args)}
    status = 0
    try:
        report["config"]["threads"] = threads()
        body = args.func(args)
        report.update(body)
        passed = all(c.get("pass", True) for c in body.get("checks", []))
        report["pass"] = passed
        status = 0 if passed else 1
    except (InputError, DigitError) as exc:
        status = 2
        report.update({"pass": False, "error": str(exc)})
        print(f"gaugeworks: {exc}", file=sys.stderr)
    except FAILURES as exc:
        status = 1
        report.update({"pass": False, "error": str(exc)})
        print(f"gaugeworks: {exc}", file=sys.stderr)
    except (ValueError, OSError) as exc:
        status = 2
        report.update({"pass": False, "error": str(exc)})
        print(f"gaugeworks: {exc}", file=sys.stderr)
    report["exit_status"] = status
    report["wall_time_float"] = round(time.perf_counter() - start, 6)
    text = ser.dumps(report)
    if getattr(args, "report", None):
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
