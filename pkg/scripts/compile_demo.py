"""Compile a polynomial into atomic equations and compare root sets in a box."""

from __future__ import annotations

import argparse
import itertools

from ensystems.compiler import compile_to_system, extend_witness, parse_poly
from ensystems.core import format_system
from ensystems.solver import poly_roots_in_box


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("poly", nargs="?", default="x1^2 - 2*x2 - 1")
    ap.add_argument("--bound", type=int, default=6)
    args = ap.parse_args()

    d = parse_poly(args.poly)
    r = compile_to_system(d)
    print(f"# {d}  ->  {r.n} variables, {len(r.system)} atoms")
    print(format_system(r.system), end="")
    roots = poly_roots_in_box(d, args.bound)
    print(f"# roots in [0,{args.bound}]^{r.p}: {roots}")
    for base in roots:
        print(f"#   {base} extends to {extend_witness(r, base)}")
    direct = [b for b in itertools.product(range(args.bound + 1), repeat=r.p)
              if d.evaluate(b) == 0]
    assert direct == roots


if __name__ == "__main__":
    main()
