"""Command line entry point: ``haarforge [run] <experiment> [flags]``."""
from __future__ import annotations

import argparse
import sys

from .config import ExperimentConfig
from .harness import ACCEPTANCE, EXPERIMENTS, run, run_acceptance

GROUPS = ("u", "so", "sp", "sn", "wreath")


def _group(value: str) -> str:
    parts = value.lower().split(",")
    bad = [p for p in parts if p not in GROUPS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown group {bad[0]!r}; choose from {', '.join(GROUPS)}")
    return ",".join(parts)


def _tolerance(value: str) -> tuple[str, float]:
    name, _, num = value.partition("=")
    if not num:
        raise argparse.ArgumentTypeError("tolerance overrides look like NAME=VALUE")
    return name, float(num)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="dimension / degree")
    p.add_argument("--delta", type=float, nargs=2, metavar=("A", "B"), help="delta = A + iB")
    p.add_argument("--theta", type=float, help="Ewens parameter")
    p.add_argument("--field", choices=("r", "c", "h"), type=str.lower)
    p.add_argument("--group", type=_group, help="one of u, so, sp, sn, wreath (comma lists allowed)")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--check", help="sub-check of the experiment (e.g. spectral, degenerations, table)")
    p.add_argument("--nmax", type=int, help="largest n in kernel sweeps")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--shards", type=int, default=1, help="Monte Carlo shards with derived seeds")
    p.add_argument("--out", help="output path (JSON report or CSV table)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--deterministic", action="store_true", help="omit timing fields from the JSON report")
    p.add_argument("--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="haarforge", description="Haar sampling by reflections, "
                                     "generalized Ewens measures and circular Jacobi kernels.")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        _add_common(sub.add_parser(name))
    acc = sub.add_parser("acceptance", help="run the numbered acceptance criteria")
    acc.add_argument("numbers", type=int, nargs="*", help="criteria to run (default: all)")
    acc.add_argument("--seed", type=int, default=1)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "run":
        argv = argv[1:]
    args = build_parser().parse_args(argv)
    if args.experiment == "acceptance":
        ok = True
        for k in args.numbers or sorted(ACCEPTANCE):
            rep = run_acceptance(k, seed=args.seed)
            ok &= rep.passed
            print(f"[{'PASS' if rep.passed else 'FAIL'}] criterion {k}: {ACCEPTANCE[k][0]}")
            for line in rep.summary_lines():
                print("    " + line)
        return 0 if ok else 1
    if args.format == "csv" and not args.out:
        print("--format csv needs --out", file=sys.stderr)
        return 2
    cfg = ExperimentConfig(
        experiment=args.experiment, n=args.n, delta=tuple(args.delta) if args.delta else None,
        theta=args.theta, field=args.field, group=args.group, samples=args.samples, seed=args.seed,
        check=args.check, nmax=args.nmax, tolerances=dict(args.tol), out=args.out, format=args.format,
        deterministic=args.deterministic, shards=args.shards,
    )
    rep = run(cfg)
    if not args.quiet:
        for line in rep.summary_lines():
            print(line)
        if not args.out:
            print(rep.to_json(args.deterministic) if args.experiment != "sample" else
                  f"{len(rep.tables.get('samples', []))} samples drawn; pass --out to save them")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
