"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget
exhausted.  Output is line-oriented ``key=value`` text and is identical for
any worker count.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import compiler, enumerator, solver, verifier
from .core import SystemSyntaxError, format_system, parse_system

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

ENV_CACHE = "ENSYSTEMS_CACHE"
ENV_WORKERS = "ENSYSTEMS_WORKERS"


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _natural(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _kappa(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("kappa must be at least 2")
    return value


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def _tuple(a: Sequence[int]) -> str:
    return ",".join(str(v) for v in a)


def _mode_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--kappa", type=_kappa, default=None)
    group.add_argument("--omega1", action="store_true")


def _workers_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=_positive, default=None,
                   help=f"worker processes (default ${ENV_WORKERS} or 1)")


def _resolve_kappa(args: argparse.Namespace) -> int | None:
    if args.omega1:
        return None
    return 2 if args.kappa is None else args.kappa


def _resolve_workers(args: argparse.Namespace) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get(ENV_WORKERS)
    if env:
        try:
            return _positive(env)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"bad {ENV_WORKERS}={env!r}") from exc
    return 1


def _read_system(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    return parse_system(text)


# -- subcommands -----------------------------------------------------------------

def cmd_beta(args, out) -> int:
    kappa = _resolve_kappa(args)
    value = enumerator.beta(args.n, args.m, kappa, _resolve_workers(args))
    print(f"n={args.n} m={args.m} mode={enumerator.mode_name(kappa)} value={value}", file=out)
    return EXIT_OK


def cmd_limit(args, out) -> int:
    kappa = _resolve_kappa(args)
    cache = args.cache or os.environ.get(ENV_CACHE) or None
    stream = enumerator.f_stream(
        args.n, kappa, max_m=args.max_m, cache=cache, restart=args.restart,
        workers=_resolve_workers(args),
    )
    for rec in stream:
        print(f"m={rec.m} value={rec.value} stable_for={rec.stable_for}", file=out, flush=True)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    system = _read_system(args.system)
    budget = solver.SolveBudget(args.bound, cap=args.cap, node_limit=args.node_limit)
    found = solver.solve_in_box(system, budget)
    for a in found:
        print(f"solution={_tuple(a)}", file=out)
    print(f"count={len(found)}", file=out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        w = verifier.family_witness(args.family, args.param)
    except verifier.VerificationError as exc:
        print(f"family={args.family} param={args.param} ok=false error={exc}", file=out)
        return EXIT_FAIL
    line = f"family={w.family} param={w.param} ok={_bool(w.ok)} max={w.claimed_max}"
    ok = w.ok
    if args.unique_check:
        unique = verifier.unique_in_box(w, node_limit=args.node_limit)
        line += f" unique={_bool(unique)}"
        ok = ok and unique
    print(line, file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compile(args, out) -> int:
    poly = compiler.parse_poly(args.poly)
    result = compiler.compile_to_system(poly)
    lines = [f"# compiled from: {poly}", f"# base variables: x1..x{result.p}"]
    for idx in range(result.p + 1, result.n + 1):
        lines.append(f"# x{idx} := {result.roles.get(idx, '?')}")
    text = "\n".join(lines) + "\n" + format_system(result.system)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"n={result.n} atoms={len(result.system)} out={args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


def cmd_dioph(args, out) -> int:
    print(compiler.dioph(_read_system(args.system)), file=out)
    return EXIT_OK


def cmd_build_sn(args, out) -> int:
    phi = _read_system(args.phi)
    out.write(format_system(compiler.build_sn(phi, args.n)))
    return EXIT_OK


def cmd_lucas_lehmer(args, out) -> int:
    prime = verifier.lucas_lehmer(args.p)
    print(f"p={args.p} prime={_bool(prime)}", file=out)
    return EXIT_OK


def cmd_pell(args, out) -> int:
    sol = verifier.pell_minimal(args.k)
    ok = True
    for step in range(args.steps + 1):
        if step:
            sol = verifier.pell_next(sol)
        ok = ok and sol.holds()
        print(f"k={sol.k} step={step} x={sol.x} y={sol.y} ok={_bool(sol.holds())}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_find_all(args, out) -> int:
    poly = compiler.parse_poly(args.poly)
    oracle = solver.BoundedSearchOracle(args.oracle_bound)
    m = solver.bound_conditional(poly, oracle, max_m=args.max_m)
    roots = solver.poly_roots_in_box(poly, m - 1) if m > 0 else []
    for a in roots:
        print(f"solution={_tuple(a)}", file=out)
    print(f"m={m} count={len(roots)}", file=out)
    return EXIT_OK


def cmd_bound_cond(args, out) -> int:
    poly = compiler.parse_poly(args.poly)
    oracle = solver.BoundedSearchOracle(args.oracle_bound)
    print(f"m={solver.bound_conditional(poly, oracle, max_m=args.max_m)}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ensystems", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beta", help="beta(n, m) for one box")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--m", type=_natural, required=True)
    _mode_flags(p)
    _workers_flag(p)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("limit", help="stream beta(n, 0), beta(n, 1), ...")
    p.add_argument("--n", type=_positive, required=True)
    _mode_flags(p)
    p.add_argument("--max-m", type=_natural, default=None,
                   help="stop after this m (default: run forever)")
    p.add_argument("--cache", default=None, help=f"JSONL cache (default ${ENV_CACHE})")
    p.add_argument("--restart", action="store_true", help="discard cached values for this key")
    _workers_flag(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("solve", help="all solutions of a system in [0, B]^n")
    p.add_argument("--system", required=True)
    p.add_argument("--bound", type=_natural, required=True)
    p.add_argument("--cap", type=_positive, default=None)
    p.add_argument("--node-limit", type=_positive, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a closed-form family witness")
    p.add_argument("--family", choices=verifier.FAMILIES, required=True)
    p.add_argument("--param", type=_positive, required=True)
    p.add_argument("--unique-check", action="store_true",
                   help="also search [0, max]^n for other solutions")
    p.add_argument("--node-limit", type=_positive, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compile", help="polynomial equation -> system")
    p.add_argument("--poly", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("dioph", help="system -> single polynomial equation")
    p.add_argument("--system", required=True)
    p.set_defaults(func=cmd_dioph)

    p = sub.add_parser("build-sn", help="pad a graph system to exactly n variables")
    p.add_argument("--phi", required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.set_defaults(func=cmd_build_sn)

    p = sub.add_parser("lucas-lehmer", help="primality of 2^p - 1")
    p.add_argument("--p", type=_positive, required=True)
    p.set_defaults(func=cmd_lucas_lehmer)

    p = sub.add_parser("pell", help="solutions of x^2 + 1 = 5^(2k+1) y^2")
    p.add_argument("--k", type=_natural, required=True)
    p.add_argument("--steps", type=_natural, default=0)
    p.set_defaults(func=cmd_pell)

    for name, func, text in (
        ("find-all", cmd_find_all, "all roots, given a YES/NO oracle"),
        ("bound-cond", cmd_bound_cond, "root height bound, given a YES/NO oracle"),
    ):
        p = sub.add_parser(name, help=text + " (bounded-search stub)")
        p.add_argument("--poly", required=True)
        p.add_argument("--oracle-bound", type=_natural, required=True,
                       help="stub answers YES iff a root with coordinates <= this exists")
        p.add_argument("--max-m", type=_natural, default=None)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (solver.BudgetExhausted, enumerator.CombinatorialLimit) as exc:
        print(f"error=budget-exhausted detail={exc}", file=sys.stderr)
        return EXIT_BUDGET
    except enumerator.CacheCorrupt as exc:
        print(f"error=cache-corrupt detail={exc} (rerun with --restart)", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, SystemSyntaxError, compiler.PolySyntaxError, ValueError) as exc:
        print(f"error=usage detail={exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
