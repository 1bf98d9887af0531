#!/usr/bin/env python3
"""Draw generalized Ewens (circular Jacobi) unitaries and compare the eigenangle
histogram with the one-point density K~_n(theta, theta)."""
import argparse

import numpy as np

from haarforge.groups import make_rng
from haarforge.kernels import one_point_density
from haarforge.laws import sample_ewens_unitary


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--delta", type=float, nargs=2, default=(0.5, 0.0), metavar=("A", "B"))
    p.add_argument("--samples", type=int, default=50_000)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="save eigenangles as .npy")
    args = p.parse_args()
    d = tuple(args.delta)
    U = sample_ewens_unitary(args.n, d, make_rng(args.seed, 0), args.samples)
    ang = np.angle(np.linalg.eigvals(U)).ravel()
    if args.out:
        np.save(args.out, ang)
    edges = np.linspace(-np.pi, np.pi, args.bins + 1)
    hist = np.histogram(ang, edges)[0] / (args.samples * np.diff(edges))
    mid = 0.5 * (edges[1:] + edges[:-1])
    dens = one_point_density(args.n, d, mid)
    print(f"{'theta':>8} {'empirical':>10} {'K_n(t,t)':>10}")
    for t, h, k in zip(mid, hist, dens):
        print(f"{t:8.3f} {h:10.4f} {k:10.4f}")


if __name__ == "__main__":
    main()
