"""Command-line interface.

Commands: solve, oracle, gen, lift, toy, check.  All file I/O is explicit
(paths or --out); diagnostics go to stderr, controlled by the DVS_LOG
environment variable (quiet, info, trace).  Exit codes: 0 success/PASS,
2 validation or input error, 3 solve finished without a global-optimality
certificate, 4 check FAIL.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
import time
from pathlib import Path

from .errors import DvsError
from .generator import GenSpec, generate
from .lift import lift
from .model import CERTIFIED_GLOBAL
from .oracle import DEFAULT_LIMIT, enumerate_discrete
from .serialize import (
    check,
    emit_lifted,
    emit_oracle_report,
    emit_problem,
    emit_report,
    emit_toy_solution,
    parse_problem,
)
from .solver import SolverConfig, solve
from .toy import ToyInstance, toy_curves, toy_solve

_LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO,
               "trace": logging.DEBUG}


def _setup_logging():
    name = os.environ.get("DVS_LOG", "quiet").lower()
    level = _LOG_LEVELS.get(name)
    if level is None:
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    if name not in _LOG_LEVELS:
        logging.getLogger("dvs").warning(
            "unknown DVS_LOG value %r; using quiet", name)


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _cmd_solve(args) -> int:
    p = parse_problem(_read(args.problem))
    cfg = SolverConfig(tol_grad=args.tol_grad, tol_gap=args.tol_gap,
                       mu_min=args.mu_min, max_iter=args.max_iter,
                       seed=args.seed,
                       fallback_oracle_max_K=args.fallback_oracle)
    report = solve(p, cfg)
    Path(args.out).write_bytes(emit_report(report, include_trace=args.trace))
    print(f"status={report.status} objective={report.objective:.12g} "
          f"gap={report.certificate.gap:.3e} iterations={report.iterations}")
    return 0 if report.status == CERTIFIED_GLOBAL else 3


def _cmd_oracle(args) -> int:
    p = parse_problem(_read(args.problem))
    t0 = time.perf_counter()
    x, value, feasible, total = enumerate_discrete(p, limit=args.limit)
    seconds = time.perf_counter() - t0
    Path(args.out).write_bytes(
        emit_oracle_report(x, value, feasible, total, seconds))
    print(f"objective={value:.12g} feasible={feasible}/{total}")
    return 0


def _cmd_gen(args) -> int:
    values = tuple(float(v) for v in args.values.split(","))
    spec = GenSpec(n=args.n, m=args.m, seed=args.seed, value_set=values)
    Path(args.out).write_bytes(emit_problem(generate(spec)))
    return 0


def _cmd_lift(args) -> int:
    p = parse_problem(_read(args.problem))
    Path(args.out).write_bytes(emit_lifted(lift(p)))
    return 0


def _cmd_toy(args) -> int:
    f = [float(v) for v in args.f.split(",")]
    t = ToyInstance(alpha=args.alpha, lam=args.lam, f=f)
    x, primal, dual, sigma1 = toy_solve(t)
    sys.stdout.write(emit_toy_solution(x, primal, dual, sigma1).decode())
    if args.curves:
        lo, hi = args.range.rsplit(":", 1)
        rows = toy_curves(t, (float(lo), float(hi)), args.steps)
        with open(args.curves, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["kind", "abscissa", "value"])
            for kind, a, v in rows:
                writer.writerow([kind, format(a, ".17g"), format(v, ".17g")])
    return 0


def _cmd_check(args) -> int:
    passed, failures = check(_read(args.problem), _read(args.report))
    if passed:
        print("PASS")
        return 0
    print("FAIL")
    for reason in failures:
        print(f"  {reason}")
    return 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dvs",
        description="Certified global solver for quadratic programs over "
                    "discrete value sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve a problem via dual maximization")
    sp.add_argument("problem", help="problem JSON file")
    sp.add_argument("--tol-grad", type=float, default=1e-8,
                    help="projected-gradient stopping threshold")
    sp.add_argument("--tol-gap", type=float, default=1e-6,
                    help="relative duality-gap certification threshold")
    sp.add_argument("--mu-min", type=float, default=1e-8,
                    help="lower bound standing in for mu > 0")
    sp.add_argument("--max-iter", type=int, default=5000)
    sp.add_argument("--seed", type=int, default=0,
                    help="recorded in the report; reserved for restarts")
    sp.add_argument("--fallback-oracle", type=int, default=24, metavar="K",
                    help="run exhaustive enumeration when not certified and "
                         "the lifted dimension is at most K (0 disables)")
    sp.add_argument("--trace", action="store_true",
                    help="include per-iteration dual values in the report")
    sp.add_argument("--out", required=True, help="report JSON output path")
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("oracle", help="exhaustive enumeration (small instances)")
    sp.add_argument("problem")
    sp.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                    help="refuse if the selection count exceeds this")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("gen", help="generate a random instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--values", default="1,2,3,4,5",
                    help="comma-separated candidate values (every variable)")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("lift", help="write the lifted 0-1 problem")
    sp.add_argument("problem")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_lift)

    sp = sub.add_parser("toy", help="solve the 1-D double-well example")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--f", required=True,
                    help="comma-separated entries of the linear term")
    sp.add_argument("--curves", help="write sampled curves to this CSV path")
    sp.add_argument("--range", default="-5:5", help="abscissa span lo:hi")
    sp.add_argument("--steps", type=int, default=1000)
    sp.set_defaults(func=_cmd_toy)

    sp = sub.add_parser("check", help="re-verify a report against its problem")
    sp.add_argument("problem")
    sp.add_argument("report")
    sp.set_defaults(func=_cmd_check)
    return parser


def _join_dash_values(argv):
    """Re-join `--range -5:5` style pairs that argparse would misread.

    argparse treats a value starting with "-" as an option string unless
    it is a plain negative number, so spans and negative vectors must be
    glued into the `--opt=value` form before parsing.
    """
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--range", "--f", "--values"):
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    _setup_logging()
    if argv is None:
        argv = sys.argv[1:]
    args = _build_parser().parse_args(_join_dash_values(argv))
    try:
        return args.func(args)
    except (DvsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
