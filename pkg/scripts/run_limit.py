"""Print the beta stream for small n and report where it settles.

    python3 scripts/run_limit.py --n 2 --max-m 6 --cache runs/beta.jsonl
"""

from __future__ import annotations

import argparse

from ensystems.enumerator import f_stream


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--kappa", type=int, default=2)
    ap.add_argument("--omega1", action="store_true")
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--cache")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    kappa = None if args.omega1 else args.kappa

    for n in args.n:
        last = None
        for rec in f_stream(n, kappa, max_m=args.max_m, cache=args.cache,
                            workers=args.workers):
            print(f"n={n} m={rec.m} {rec.mode} value={rec.value} stable_for={rec.stable_for}")
            last = rec
        if last is not None:
            print(f"# n={n}: last value {last.value}, unchanged for {last.stable_for} step(s)")


if __name__ == "__main__":
    main()
