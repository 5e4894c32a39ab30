"""Command-line front end.

Exit codes: 0 success, 1 usage or precondition failure, 2 unresolved
trajectories, 3 a safe-rule link of the bound chain failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from pathlib import Path

from . import bounds
from .congruence import build_number, decompose, format_tuple, is_primary_solution, parse_tuple, verify_inverse
from .lift import LiftError, certified_generate, lift, size_audit
from .syracuse import DEFAULT_CAP, CensusTable, UnresolvedError, census, level, trajectory, Level

EXIT_OK, EXIT_USAGE, EXIT_UNRESOLVED, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _odd(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"not an integer: {text!r}") from None
    if n < 1 or n % 2 == 0:
        raise UsageError(f"expected an odd positive integer, got {n}")
    return n


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"not an integer: {text!r}") from None
    if n < 1:
        raise UsageError(f"expected a positive integer, got {n}")
    return n


def _tuple(text: str) -> tuple[int, ...]:
    try:
        return parse_tuple(text)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(args, text: str) -> None:
    # summaries go to stderr when stdout carries the data
    print(text, file=sys.stderr if not args.out else sys.stdout)


def cmd_level(args) -> int:
    n = _odd(args.n)
    t = trajectory(n, args.cap)
    for v, k in t.steps:
        print(f"{v}  (ord2 = {k})")
    if not t.terminated:
        print(f"unresolved after {args.cap} steps")
        return EXIT_UNRESOLVED
    print(f"level {len(t.steps)}")
    return EXIT_OK


def cmd_census(args) -> int:
    x = _positive(args.x)
    table = census(x, cap=args.cap, shards=args.shards)
    _emit(table.to_json() if args.format == "json" else table.to_csv(), args.out)
    _note(args, f"total {table.total}")
    _note(args, f"max level {table.max_level}")
    _note(args, f"unresolved {table.unresolved}")
    return EXIT_UNRESOLVED if table.unresolved else EXIT_OK


def cmd_decompose(args) -> int:
    n = _odd(args.n)
    if n == 1:
        raise UsageError("decompose needs n > 1")
    if n % 3 == 0:
        raise UsageError(f"{n} is divisible by 3")
    try:
        v = decompose(n, args.cap)
    except UnresolvedError as e:
        print(e)
        return EXIT_UNRESOLVED
    print(format_tuple(v))
    print(f"is_primary_solution: {str(is_primary_solution(v)).lower()}")
    print(f"B(v) = {build_number(v).n}")
    return EXIT_OK


def cmd_build(args) -> int:
    v = _tuple(args.v)
    if any(k < 1 for k in v):
        raise UsageError("tuple entries must be positive")
    if not is_primary_solution(v):
        raise UsageError(f"{format_tuple(v)} does not solve the level-{len(v)} equation")
    n = build_number(v).n
    if v[0] <= 2:
        print(f"{n} (v_1 <= 2, level not checked)")
        return EXIT_OK
    try:
        ok = verify_inverse(v, args.cap)
    except UnresolvedError as e:
        print(f"{n} ({e})")
        return EXIT_UNRESOLVED
    print(f"{n} (level {len(v)} verified)" if ok else f"{n} (level check FAILED)")
    return EXIT_OK if ok else EXIT_BOUND


def cmd_lift(args) -> int:
    u = _tuple(args.u)
    mult: Counter = Counter()
    try:
        v = lift(u, selector=args.selector, strict=args.strict, multiplicities=mult)
    except ValueError as e:
        raise UsageError(str(e)) from None
    except LiftError as e:
        print(f"lift failed: {e}")
        return EXIT_BOUND
    n = build_number(v).n
    print(f"{format_tuple(v)} → {n}")
    print(f"is_primary_solution: {str(is_primary_solution(v)).lower()}")
    lv = level(n, args.cap)
    print(f"level: {lv.l if isinstance(lv, Level) else 'unresolved'} (expected {len(u)})")
    print(f"candidates per step: {dict(sorted(mult.items()))}")
    return EXIT_OK


def cmd_generate(args) -> int:
    x, l = _positive(args.x), _positive(args.l)
    try:
        b = bounds.resolve_budget(args.budget, x, l)
    except ValueError:
        raise UsageError(f"budget must be a number, 'paper' or 'safe': {args.budget!r}") from None
    try:
        batch = certified_generate(x, l, b, selector=args.selector, strict=args.strict)
    except LiftError as e:
        print(f"generation aborted: {e}", file=sys.stderr)
        return EXIT_BOUND
    _emit(batch.to_json() if args.format == "json" else batch.to_csv(), args.out)
    _note(args, f"budget {b}: {len(batch.records)} tuples, admitted {batch.admitted}, oversize {batch.oversize}")
    _note(args, f"candidates per step: {dict(sorted(batch.multiplicities.items()))}")
    audit = size_audit(batch.records)
    _note(args, f"n <= 12^-l 4^(3 sum u): {audit['within_12']}/{audit['records']}; "
                f"n <= 192^-l 4^(3 sum u): {audit['within_192']}/{audit['records']}")
    return EXIT_OK


def cmd_omega(args) -> int:
    try:
        y = float(args.y)
    except ValueError:
        raise UsageError(f"not a number: {args.y!r}") from None
    print(bounds.omega(y, _positive(args.l), args.least))
    return EXIT_OK


def cmd_bound(args) -> int:
    x = _positive(args.x)
    if x < 2:
        raise UsageError("bound needs x >= 2")
    try:
        bounds.theorem_parameters(x, args.reading)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.census:
        try:
            data = json.loads(Path(args.census).read_text())
            table = CensusTable.from_dict(data)
        except (OSError, ValueError, KeyError, TypeError) as e:
            raise UsageError(f"cannot read census file {args.census} (JSON census expected): {e}") from None
        if table.x != x:
            raise UsageError(f"census file is for x = {table.x}, not {x}")
    else:
        table = census(x, cap=args.cap, shards=args.shards)
    report = bounds.bound_report(x, table, rule=args.rule, reading=args.reading)
    if args.out:
        Path(args.out).write_text(report.to_json() if args.format == "json" else report.to_csv())
    if args.csv:
        sys.stdout.write(report.to_csv())
    else:
        sys.stdout.write(report.to_table())
    if not report.safe_ok:
        for k in report.failed_links():
            print(f"safe link failed: {k.name}: {k.lhs} < {k.rhs}", file=sys.stderr)
        return EXIT_BOUND
    return EXIT_UNRESOLVED if table.unresolved else EXIT_OK


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies use SUPPRESS so they do not overwrite flags given before the subcommand
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="Syracuse steps per number (default 10^5)")
    common.add_argument("--shards", type=int, default=d(os.cpu_count() or 1), help="census shards (default: CPU count)")
    common.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    common.add_argument("--out", default=d(None), help="output file (default stdout)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    p = argparse.ArgumentParser(prog="collatz-census", description=__doc__.splitlines()[0], parents=[_common(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("level", parents=[common], help="trajectory and level of an odd n")
    s.add_argument("n")
    s.set_defaults(func=cmd_level)

    s = sub.add_parser("census", parents=[common], help="exact pi(x) and pi(x, l)")
    s.add_argument("x")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("decompose", parents=[common], help="solution tuple of a Collatz number")
    s.add_argument("n")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("build", parents=[common], help="Collatz number B(v) of a solution tuple, e.g. 4,3")
    s.add_argument("v")
    s.set_defaults(func=cmd_build)

    for name, helptext in (("lift", "lift a free tuple, e.g. 2,2"), ("generate", "certified generation of level-l numbers")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        if name == "lift":
            s.add_argument("u")
            s.set_defaults(func=cmd_lift)
        else:
            s.add_argument("x")
            s.add_argument("l")
            s.add_argument("--budget", default="safe", help="number, 'paper' or 'safe'")
            s.set_defaults(func=cmd_generate)
        s.add_argument("--selector", choices=("smallest", "paper"), default="smallest")
        s.add_argument("--strict", action="store_true", help="require free-tuple entries prime to 3")

    s = sub.add_parser("omega", parents=[common], help="ordered partition count omega(y, l)")
    s.add_argument("y")
    s.add_argument("l")
    s.add_argument("--least", type=int, default=2, help="smallest allowed part (default 2)")
    s.set_defaults(func=cmd_omega)

    s = sub.add_parser("bound", parents=[common], help="evaluate the lower-bound chain at x")
    s.add_argument("x")
    s.add_argument("--rule", choices=bounds.RULES, default="safe")
    s.add_argument("--reading", choices=("log", "four"), default="log",
                   help="denominator of the level choice: 3 + log4(3) or 4")
    s.add_argument("--census", help="reuse a JSON census file for the same x")
    s.add_argument("--csv", action="store_true", help="print plot-ready CSV rows instead of the table")
    s.set_defaults(func=cmd_bound)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.cap < 1 or args.shards < 1:
        print("error: --cap and --shards must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
