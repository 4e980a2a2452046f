"""Command-line interface: ``achieveset <command> ...``.

Exit codes: 0 success or all checks passed, 1 a check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .classifier import DEFAULT_DEPTH, DEFAULT_HORIZON, ClassificationError, classify
from .compactset import IntervalUnion, IntervalUnionError, hausdorff
from .families import FamilyError, FamilySpec
from .numbers import format_rational, parse_rational
from .sequences import SequenceError
from .subsum import ORACLE_LIMIT, SubsumError, approximate, refine
from .suites import SUITES
from .verify import verify_classification


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _load_json(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith(("{", "[")):
        text = source
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _spec(source: str) -> FamilySpec:
    try:
        return FamilySpec.from_json(_load_json(source))
    except FamilyError as exc:
        raise UsageError(f"{source}: {exc}") from None


def _set(source: str) -> IntervalUnion:
    text = source.strip()
    if text.startswith("{") or (not text.startswith("[") and Path(text).exists()):
        return IntervalUnion.from_json(_load_json(text))
    return IntervalUnion.parse(text)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _warn(spec: FamilySpec) -> None:
    for w in spec.warnings():
        print(f"warning: {spec.kind}: {w}", file=sys.stderr)


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    spec = _spec(args.spec)
    _warn(spec)
    _emit(dumps(spec.describe()), args.output)
    return 0


def cmd_approx(args) -> int:
    spec = _spec(args.spec)
    _warn(spec)
    seq = spec.build()
    if args.eps is not None:
        approx = refine(seq, parse_rational(args.eps), args.max_intervals)
    else:
        approx = approximate(seq, args.depth)
    _emit(dumps(approx.to_json()), args.output)
    return 0


def cmd_classify(args) -> int:
    spec = _spec(args.spec)
    _warn(spec)
    result = classify(spec.build(), horizon=args.horizon, depth=args.depth)
    out = result.to_json()
    out["input"] = spec.to_json()
    _emit(dumps(out), args.output)
    return 0


def cmd_hausdorff(args) -> int:
    _emit(format_rational(hausdorff(_set(args.a), _set(args.b))) + "\n", args.output)
    return 0


def _suite_report(name: str) -> dict:
    return SUITES[name]().to_json()


def cmd_verify(args) -> int:
    if args.certificate:
        obj = _load_json(args.certificate)
        report = verify_classification(obj)
        _emit(dumps(report.to_json()), args.output)
        return 0 if report.ok else 1
    names = list(SUITES) if args.suite == "all" else [args.suite]
    lines = []
    reports = _fan_out(_suite_report, names, args.jobs)
    for rep in reports:
        for c in rep["checks"]:
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {rep['suite']}: {c['name']}"
                         + (f" ({c['detail']})" if c["detail"] and not c["passed"] else ""))
    ok = all(rep["passed"] for rep in reports)
    if args.json:
        _emit(dumps({"passed": ok, "suites": reports}), args.output)
    else:
        _emit("\n".join(lines) + "\n", args.output)
    return 0 if ok else 1


def _fan_out(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def _sweep_row(task) -> list[str]:
    base, param, value, horizon, depth = task
    obj = dict(base)
    obj[param] = format_rational(value)
    try:
        seq = FamilySpec.from_json(obj).build()
    except FamilyError as exc:
        return [format_rational(value), "Error", "", "", str(exc)]
    result = classify(seq, horizon=horizon, depth=depth)
    n0 = getattr(result.certificate, "n0", "")
    approx = approximate(seq, depth)
    return [format_rational(value), result.verdict, str(n0), format_rational(approx.error_bound),
            str(approx.outer.component_count())]


def cmd_sweep(args) -> int:
    lo, hi = parse_rational(getattr(args, "from")), parse_rational(args.to)
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    base = {"kind": args.family}
    if args.base:
        base.update(_load_json(args.base))
    step = (hi - lo) / (args.steps - 1)
    tasks = [(base, args.param, lo + i * step, args.horizon, args.depth) for i in range(args.steps)]
    rows = _fan_out(_sweep_row, tasks, args.jobs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "verdict", "n0", "error_bound", "components"])
    writer.writerows(rows)
    _emit(buf.getvalue(), args.output)
    return 0


# ---------------------------------------------------------------------------
# parser


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="interval precision in bits (>= 64, default 128)")
    common.add_argument("--horizon", type=_positive_int, default=DEFAULT_HORIZON,
                        help="largest index for exact certificate checks")
    common.add_argument("--depth", type=int, default=None, help="subsum depth")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for sweep and verify")

    parser = argparse.ArgumentParser(prog="achieveset", description="Achievement sets of convergent series.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="validate a family descriptor and add derived metadata")
    p.add_argument("spec", help="descriptor JSON: a file, '-' for stdin, or an inline object")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("approx", parents=[common], help="inner and outer subsum sets")
    p.add_argument("spec")
    p.add_argument("--eps", help="target error bound; picks the depth automatically")
    p.add_argument("--max-intervals", type=_positive_int, default=1 << 20)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("classify", parents=[common], help="certified classification")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("hausdorff", parents=[common], help="Hausdorff distance of two interval unions")
    p.add_argument("a", help="'[0,1] [2,3]' text, a JSON file or inline JSON")
    p.add_argument("b")
    p.set_defaults(func=cmd_hausdorff)

    p = sub.add_parser("verify", parents=[common], help="run a check suite or replay a certificate")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    g.add_argument("--certificate", help="classification JSON to replay")
    p.add_argument("--json", action="store_true", help="structured report instead of text lines")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="classify along a parameter range, CSV output")
    p.add_argument("--family", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--base", help="JSON object with the family's other fields")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.precision is not None:
        if args.precision < 64:
            print("error: --precision must be at least 64", file=sys.stderr)
            return 2
        os.environ["ACHIEVESET_PRECISION"] = str(args.precision)
    if args.depth is None:
        args.depth = {"approx": 20, "sweep": 12}.get(args.command, DEFAULT_DEPTH)
    if args.command == "approx" and args.eps is None and args.depth > 28:
        print("error: --depth above 28 is too large for exact enumeration", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FamilyError, SequenceError, SubsumError, IntervalUnionError, ClassificationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
