"""Command-line front end.

Exit codes: 0 all equal, 1 mismatch finding, 2 usage or parameter error,
3 refusal (non-compact regime, missing character data).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from typing import Optional, Sequence

from .cache import CensusCache
from .census import Cocharacter, NonCompactError, dimension_table, ow, require_compact
from .identities import (
    Context,
    IdentityCase,
    ParameterError,
    Report,
    UnknownIdentity,
    catalog,
    compare,
    default_cases,
    exit_status,
    run_case,
)
from .specdsl import DslSyntaxError, EvalError, evaluate, parse

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_params(text: str) -> dict:
    """``r=3,m=1`` or ``alpha=1,beta=2,w=[0,1]`` into a dict of ints / int lists."""
    out: dict = {}
    if not text.strip():
        return out
    for item in re.split(r",(?![^\[]*\])", text):
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        key, value = (s.strip() for s in item.split("=", 1))
        if value.startswith("["):
            if not value.endswith("]"):
                raise UsageError(f"unterminated list in {item!r}")
            out[key] = _int_list(value)
        else:
            try:
                out[key] = int(value)
            except ValueError:
                raise UsageError(f"parameter {key} must be an integer, got {value!r}") from None
    return out


def _emit_series(s, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(s.to_json(), separators=(",", ":")) + "\n")
    elif fmt == "csv":
        out.write(s.to_csv())
    else:
        out.write(str(s) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_census(args, ctx: Context, out) -> int:
    if args.ow is not None:
        if not 0 <= args.ow <= args.r:
            raise UsageError(f"--ow must lie in [0, {args.r}]")
        w = ow(args.r, args.ow)
    elif args.weights is not None:
        w = tuple(_int_list(args.weights))
    else:
        raise UsageError("one of --weights or --ow is required")
    if len(w) != args.r:
        raise UsageError(f"--weights has {len(w)} entries but --r is {args.r}")
    try:
        c = Cocharacter(args.alpha, args.beta, w)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    require_compact(c)
    if args.jobs > 1:
        table = dimension_table(c, args.max_n, jobs=args.jobs)
        for n, dims in enumerate(table):
            ctx.cache.get_put((c.rank, c.alpha, c.beta, c.w, n), lambda d=dims: d)
    else:
        table = dimension_table(c, args.max_n, ctx.source)
    levels = []
    for n, dims in enumerate(table):
        poly = [0] * (max(dims) + 1)
        for d in dims:
            poly[d] += 1
        levels.append({"n": n, "dimensions": dims, "h0": poly[0], "poincare": poly})
    if args.format == "json":
        data = {"r": c.rank, "alpha": c.alpha, "beta": c.beta, "w": list(c.w), "max_n": args.max_n, "levels": levels}
        out.write(json.dumps(data, separators=(",", ":")) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["n", "fixed_points", "h0", "poincare", "dimensions"])
        for lv in levels:
            wr.writerow([
                lv["n"], len(lv["dimensions"]), lv["h0"],
                ";".join(map(str, lv["poincare"])), ";".join(map(str, lv["dimensions"])),
            ])
        out.write(buf.getvalue())
    else:
        out.write(f"cocharacter alpha={c.alpha} beta={c.beta} w={list(c.w)}\n")
        for lv in levels:
            out.write(f"n={lv['n']}: h0={lv['h0']} poincare={lv['poincare']} dims={lv['dimensions']}\n")
    return EXIT_OK


def _eval(text: str, order: int, t_order: Optional[int], ctx: Context):
    return evaluate(parse(text), order, t_order, ctx.source)


def cmd_series(args, ctx: Context, out) -> int:
    s = _eval(args.expr, args.order, args.t_order, ctx)
    _emit_series(s, args.format, out)
    return EXIT_OK


def _emit_reports(reports: Sequence[Report], out, timings: bool) -> None:
    for r in reports:
        out.write(r.to_json() + "\n")
    if timings:
        for r in reports:
            sys.stderr.write(f"{r.identity} {json.dumps(r.params, separators=(',', ':'))} {r.runtime:.3f}s\n")


def cmd_verify(args, ctx: Context, out) -> int:
    case = IdentityCase(args.identity, parse_params(args.params), args.order)
    report = run_case(case, ctx)
    _emit_reports([report], out, args.timings)
    return exit_status([report])


def cmd_verify_all(args, ctx: Context, out) -> int:
    reports = [run_case(c, ctx) for c in default_cases(args.order)]
    _emit_reports(reports, out, args.timings)
    return exit_status(reports)


def cmd_list(args, ctx: Context, out) -> int:
    entries = [s.describe() for s in catalog()]
    if args.format == "json":
        out.write(json.dumps(entries, separators=(",", ":")) + "\n")
    else:
        for e in entries:
            params = ",".join(e["params"]) or "-"
            out.write(f"{e['identity']:<14} params={params:<16} [{e['constraints']}]  {e['anchor']}\n")
    return EXIT_OK


def cmd_compare(args, ctx: Context, out) -> int:
    lhs = _eval(args.lhs, args.order, args.t_order, ctx)
    rhs = _eval(args.rhs, args.order, args.t_order, ctx)
    try:
        report = compare(lhs, rhs, "compare")
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    report.params = {"lhs": args.lhs, "rhs": args.rhs}
    _emit_reports([report], out, False)
    return exit_status([report])


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fixedloci", description="Fixed loci of framed sheaf moduli and q-series identities.")
    ap.add_argument("--cache", metavar="PATH", help="census cache file (default: $MODULI_CACHE, else in-memory)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("json", "csv")):
        g = p.add_mutually_exclusive_group()
        for c in choices:
            g.add_argument(f"--{c}", dest="format", action="store_const", const=c)
        p.set_defaults(format="text")

    p = sub.add_parser("census", help="cell-dimension census of the fixed locus")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--weights", help="comma-separated w_1,..,w_r")
    p.add_argument("--ow", type=int, metavar="M", help="shorthand for w = (1,)*M + (0,)*(r-M)")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    fmt(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("series", help="evaluate an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--t-order", type=int)
    fmt(p)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify", help="run one catalog identity")
    p.add_argument("--identity", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--char-file")
    p.add_argument("--timings", action="store_true", help="print runtimes to stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="run every fully computable catalog case")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--timings", action="store_true", help="print runtimes to stderr")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("list-identities", help="show the identity catalog")
    fmt(p, ("json",))
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("compare", help="compare two expressions")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--t-order", type=int)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    for name in ("order", "max_n", "t_order"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            sys.stderr.write(f"error: --{name.replace('_', '-')} must be nonnegative\n")
            return EXIT_USAGE
    ctx = Context(cache=CensusCache.from_env(args.cache), char_file=getattr(args, "char_file", None))
    try:
        return args.func(args, ctx, out)
    except NonCompactError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EXIT_REFUSED
    except DslSyntaxError as exc:
        sys.stderr.write(f"syntax error at {exc}\n")
        return EXIT_USAGE
    except (UsageError, ParameterError, UnknownIdentity, EvalError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownIdentity) else str(exc)
        sys.stderr.write(f"error: {msg}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
