#!/usr/bin/env python3
"""Run the numbered acceptance criteria on one or more seeds and print a pass/fail table."""
import argparse
import sys

from haarforge.config import ACCEPTANCE_SEEDS
from haarforge.harness import ACCEPTANCE, run_acceptance


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("numbers", type=int, nargs="*", help="criteria to run (default: all)")
    p.add_argument("--seeds", type=int, nargs="+", default=list(ACCEPTANCE_SEEDS))
    p.add_argument("-v", "--verbose", action="store_true", help="print every check")
    args = p.parse_args()
    ok = True
    for k in args.numbers or sorted(ACCEPTANCE):
        reps = [run_acceptance(k, seed=s) for s in args.seeds]
        passed = all(r.passed for r in reps)
        ok &= passed
        secs = sum(r.wall_time for r in reps)
        print(f"[{'PASS' if passed else 'FAIL'}] {k:2d} {ACCEPTANCE[k][0]:45s} {secs:6.1f}s")
        for s, r in zip(args.seeds, reps):
            for line in r.summary_lines():
                if args.verbose or line.startswith("FAIL"):
                    print(f"      seed {s}: {line}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
