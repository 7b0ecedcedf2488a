"""Verify every closed-form family witness and print a summary table."""

from __future__ import annotations

import argparse
import time

from ensystems.verifier import VerificationError, family_witness, unique_in_box

PARAMS = {
    "intro1": [3, 4, 5, 6],
    "intro2": [2, 3, 4],
    "thm2": [2, 3, 5, 7, 13],
    "thm3": [1, 2, 3, 4],
    "thm4": [1, 2, 3],
    "uncond": [1, 2, 3, 4],
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--unique", action="store_true", help="also box-check uniqueness where cheap")
    args = ap.parse_args()

    failures = 0
    for family, params in PARAMS.items():
        for n in params:
            start = time.perf_counter()
            try:
                w = family_witness(family, n)
            except VerificationError as exc:
                failures += 1
                print(f"{family:7s} n={n:<3d} FAILED  {exc}")
                continue
            extra = ""
            if args.unique and w.claimed_max <= 300:
                extra = f" unique={unique_in_box(w)}"
            bits = w.claimed_max.bit_length()
            print(f"{family:7s} n={n:<3d} ok  vars={w.system.n:<3d} max_bits={bits:<7d}"
                  f" {time.perf_counter() - start:.3f}s{extra}")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
