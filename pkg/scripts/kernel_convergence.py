#!/usr/bin/env python3
"""Sup-grid error of n^{-1} K~_n(theta/n, tau/n) against the confluent hypergeometric limit.

Writes a CSV with one row per (delta, n) when --out is given.
"""
import argparse
import csv

import numpy as np

from haarforge.kernels import convergence_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--delta", type=float, nargs=2, action="append", metavar=("A", "B"),
                   help="repeatable; default 0, 0.5, 0.5+0.3i")
    p.add_argument("--n", type=int, nargs="+", default=[50, 100, 200, 400, 800])
    p.add_argument("--grid", type=int, default=60, help="points in [-3, 3]")
    p.add_argument("--out")
    args = p.parse_args()
    deltas = args.delta or [(0.0, 0.0), (0.5, 0.0), (0.5, 0.3)]
    grid = np.linspace(-3, 3, args.grid)
    rows = []
    for d in deltas:
        sweep = convergence_sweep(tuple(d), grid, args.n)
        prev = None
        for r in sweep:
            rate = "" if prev is None else f"{prev / r['sup_error']:.2f}"
            print(f"delta={d[0]:+.2f}{d[1]:+.2f}i  n={r['n']:5d}  sup_error={r['sup_error']:.3e}  ratio={rate}")
            prev = r["sup_error"]
            rows.append({"a": d[0], "b": d[1], "n": r["n"], "sup_error": r["sup_error"]})
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)


if __name__ == "__main__":
    main()
