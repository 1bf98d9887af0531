"""Experiment registry: every verification run produces an ExperimentReport."""
from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from . import kernels as K
from .config import ExperimentConfig, ExperimentReport
from .delta import DeltaParameter
from .enumeration import enumerate_sn_check, enumerate_wreath_check
from .groups import FieldTag, GroupSpec, haar_with_gammas, make_rng, matrix_to_json, sample_haar, unitarity_defect
from .identities import run_identity_suite
from .laws import (det_delta_from_gammas, det_split_exact, random_reflections, sample_ewens_unitary,
                   sample_factors_so2n, sample_factors_symplectic, sample_factors_unitary)
from .quadrature import circle_rule, gauss_legendre, graded_rule
from .quaternion import embed_quaternion
from .specfun import rgamma
from .stats import binned_counts, ks_two_sample, mean_se, self_normalized_is, z_score

EXPERIMENTS: dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {}

_CHUNK = 25000


def experiment(name: str):
    def deco(fn):
        EXPERIMENTS[name] = fn
        return fn
    return deco


def worker_count(shards: int) -> int:
    cap = int(os.environ.get("HAARFORGE_THREADS", "0") or 0)
    return max(1, min(shards, cap)) if cap > 0 else shards


def sharded(cfg: ExperimentConfig, total: int, stream: int, draw: Callable[[np.random.Generator, int], np.ndarray]):
    """Run ``draw(rng, count)`` over cfg.shards shards with seeds (seed, stream + shard).

    Shards are concatenated in shard order, so the result only depends on
    (seed, shards), not on the worker count.
    """
    sizes = [total // cfg.shards + (1 if i < total % cfg.shards else 0) for i in range(cfg.shards)]

    def run(i):
        rng = make_rng(cfg.seed, stream + i)
        parts = []
        left = sizes[i]
        while left > 0:
            m = min(_CHUNK, left)
            parts.append(draw(rng, m))
            left -= m
        return np.concatenate(parts) if parts else np.empty(0)

    if cfg.shards == 1:
        return run(0)
    with ThreadPoolExecutor(max_workers=worker_count(cfg.shards)) as ex:
        return np.concatenate(list(ex.map(run, range(cfg.shards))))


def _deltas(cfg: ExperimentConfig, default):
    return [DeltaParameter.coerce(tuple(cfg.delta))] if cfg.delta is not None else [DeltaParameter.coerce(d) for d in default]


# -- splitting ----------------------------------------------------------------

@experiment("splitting-exact")
def splitting_exact(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("splitting-exact", cfg.echo())
    fields = [cfg.field] if cfg.field else ["r", "c", "h"]
    n_max = cfg.n or 8
    trials = cfg.samples or 200
    tol = cfg.tol("rel", 1e-10)
    for i, f in enumerate(fields):
        rng = make_rng(cfg.seed, i)
        worst = 0.0
        for t in range(trials):
            n = int(rng.integers(1, n_max + 1))
            refl = random_reflections(n, f, rng, general=bool(t % 2))
            lhs, rhs = det_split_exact(refl)
            worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
        rep.check(f"field_{f.upper()}", worst, tol)
    return rep


def _abs_det_unitary(n):
    def draw(rng, m):
        U = sample_haar(GroupSpec("U", n), rng, m)
        return np.abs(np.linalg.det(np.eye(n) - U))
    return draw


def _det_so(n):
    def draw(rng, m):
        G = sample_haar(GroupSpec("SO", n), rng, m)
        return np.linalg.det(np.eye(n) - G)
    return draw


def _det_sp(n):
    def draw(rng, m):
        G = sample_haar(GroupSpec("UH", n), rng, m)
        return np.real(np.linalg.det(np.eye(2 * n) - embed_quaternion(G)))
    return draw


@experiment("splitting-law")
def splitting_law(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("splitting-law", cfg.echo())
    groups = cfg.group.split(",") if cfg.group else ["u", "so", "sp"]
    N = cfg.samples or 100_000
    for g in groups:
        if g == "u":
            n = cfg.n or 5
            mat = sharded(cfg, N, 0, _abs_det_unitary(n))
            fac = sharded(cfg, N, 100, lambda rng, m: np.abs(sample_factors_unitary(n, rng, m).product))
            rep.check(f"U({n})_ks", ks_two_sample(mat, fac), cfg.tol("ks_u", 0.01))
            for name, x in (("matrix", mat), ("factor", fac)):
                m, se = mean_se(x ** 2)
                z = abs(m - (n + 1)) / se
                rep.statistics[f"U({n})_E|det|^2_{name}"] = [m, se]
                rep.check(f"U({n})_E|det|^2={n + 1}_{name}_z", z, 3.0)
        elif g == "so":
            n = cfg.n or 4
            if n % 2:
                raise ValueError("SO splitting law needs even n")
            mat = sharded(cfg, N, 200, _det_so(n))
            fac = sharded(cfg, N, 300, lambda rng, m: np.real(sample_factors_so2n(n // 2, rng, m).product))
            rep.check(f"SO({n})_ks", ks_two_sample(mat, fac), cfg.tol("ks_so", 0.015))
            rep.check(f"SO({n})_det_nonnegative", float(-min(mat.min(), 0.0)), 1e-10)
        elif g == "sp":
            n = cfg.n or 2
            mat = sharded(cfg, N, 400, _det_sp(n))
            fac = sharded(cfg, N, 500, lambda rng, m: sample_factors_symplectic(n, rng, m).product)
            rep.check(f"U({n},H)_ks", ks_two_sample(mat, fac), cfg.tol("ks_sp", 0.015))
            nf = max(n, 3)
            a = sharded(cfg, N, 600, lambda rng, m: sample_factors_symplectic(nf, rng, m, "sphere").product)
            b = sharded(cfg, N, 700, lambda rng, m: sample_factors_symplectic(nf, rng, m, "beta").product)
            rep.check(f"symplectic_forms_n{nf}_ks", ks_two_sample(a, b), cfg.tol("ks_forms", 0.01))
        else:
            raise ValueError(f"splitting-law has no group {g!r}")
    return rep


# -- Ewens --------------------------------------------------------------------

@experiment("ewens-enum")
def ewens_enum(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("ewens-enum", cfg.echo())
    groups = cfg.group.split(",") if cfg.group else ["sn", "wreath"]
    tol = cfg.tol("deviation", 1e-12)
    for g in groups:
        if g == "sn":
            thetas = [cfg.theta] if cfg.theta else [0.5, 1.0, 2.0]
            ns = [cfg.n] if cfg.n else range(1, 6)
            for th in thetas:
                dev = max(enumerate_sn_check(n, th)["max_deviation"] for n in ns)
                rep.check(f"Sn_theta{th:g}_n<={max(ns)}", dev, tol)
        elif g == "wreath":
            ns = [cfg.n] if cfg.n else range(1, 5)
            for d in _deltas(cfg, [0.5, 1.0]):
                for method in ("steps", "det"):
                    dev = max(enumerate_wreath_check(n, d, method)["max_deviation"] for n in ns)
                    rep.check(f"Z2wrSn_delta{d}_{method}_n<={max(ns)}", dev, tol)
        else:
            raise ValueError(f"ewens-enum has no group {g!r}")
    return rep


def _trace_draw(n, d):
    def draw(rng, m):
        return np.trace(sample_ewens_unitary(n, d, rng, m), axis1=1, axis2=2)
    return draw


def _haar_trace_weight(n, d):
    def draw(rng, m):
        M, g = haar_with_gammas(GroupSpec("U", n), rng, m)
        tr = np.trace(M, axis1=1, axis2=2)
        return np.stack([tr, det_delta_from_gammas(g, d) + 0j], axis=1)
    return draw


def _spectral_bin_mass(n, d, edges):
    masses = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if lo == 0.0 or hi == 0.0:
            x, w = graded_rule(lo, hi, 2 * d.a, toward="lo" if lo == 0.0 else "hi")
        else:
            x, w = gauss_legendre(30, lo, hi)
        masses.append(float(np.sum(K.one_point_density(n, d, x) * w)))
    return np.array(masses)


@experiment("ewens-unitary")
def ewens_unitary(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("ewens-unitary", cfg.echo())
    check = cfg.check or "moments"
    N = cfg.samples or 200_000
    if check == "moments":
        ns = [cfg.n] if cfg.n else [1, 2, 3]
        zt = cfg.tol("z", 4.0)
        for d in _deltas(cfg, [0.5, 1.0]):
            for n in ns:
                tr = sharded(cfg, N, 1000 + 10 * n, _trace_draw(n, d))
                hw = sharded(cfg, N, 2000 + 10 * n, _haar_trace_weight(n, d)).reshape(-1, 2)
                htr, w = hw[:, 0], hw[:, 1].real
                tests = (("1", np.ones(tr.size), np.ones(htr.size)), ("ReTr", tr.real, htr.real),
                         ("|Tr|^2", np.abs(tr) ** 2, np.abs(htr) ** 2))
                for name, f, fh in tests:
                    m, se = mean_se(f)
                    est, se2 = self_normalized_is(fh, w)
                    rep.statistics[f"n{n}_delta{d}_{name}"] = {"sampler": [m, se], "importance": [est, se2]}
                    rep.check(f"n{n}_delta{d}_{name}_z", abs(z_score(m, se, est, se2)), zt)
    elif check == "spectral":
        n = cfg.n or 3
        d = _deltas(cfg, [0.5])[0]
        bins = 40
        edges = np.linspace(-np.pi, np.pi, bins + 1)
        U = sharded(cfg, N, 3000, lambda rng, m: sample_ewens_unitary(n, d, rng, m))
        angles = np.angle(np.linalg.eigvals(U.reshape(-1, n, n)))
        counts = binned_counts(angles, edges)
        obs = counts.mean(axis=0)
        se = counts.std(axis=0, ddof=1) / np.sqrt(counts.shape[0])
        exp = _spectral_bin_mass(n, d, edges)
        z = np.abs(obs - exp) / se
        rep.statistics["bins"] = [{"lo": float(a), "hi": float(b), "observed": float(o), "expected": float(e),
                                   "se": float(s)} for a, b, o, e, s in zip(edges[:-1], edges[1:], obs, exp, se)]
        rep.tables["spectral"] = rep.statistics["bins"]
        rep.check("max_bin_z", float(z.max()), cfg.tol("z", 3.0))
        rep.check("bins_within_3se", int(np.sum(z <= 3.0)), bins, passed=bool(np.all(z <= cfg.tol("z", 3.0))))
    else:
        raise ValueError(f"ewens-unitary has no check {check!r}")
    return rep


# -- orthogonal polynomials and kernels --------------------------------------------

def _leading_coefficient(n, d, M=64):
    # exact DFT of a degree-n polynomial sampled at M > n roots of unity
    z = np.exp(2j * np.pi * np.arange(M) / M)
    return np.sum(K.monic_phi(n, d, z) * z ** (-n)) / M


@experiment("opuc-orth")
def opuc_orth(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("opuc-orth", cfg.echo())
    deg = cfg.n or 8
    for d in _deltas(cfg, [(0.3, 0.2), (-0.3, 0.5), (1.0, 0.0)]):
        x, w = circle_rule(2 * d.a)
        wt = K.normalization_c(d) * K.weight_w1(x, d) * w
        z = np.exp(1j * x)
        P = np.array([K.monic_phi(k, d, z) for k in range(deg + 1)])
        G = (np.conj(P) * wt) @ P.T
        target = np.diag([K.phi_norm_sq(k, d) for k in range(deg + 1)])
        rep.check(f"gram_delta{d}", float(np.max(np.abs(G - target))), cfg.tol("gram", 1e-8))
        lead = max(abs(_leading_coefficient(k, d) - 1) for k in range(1, 11))
        rep.check(f"monic_delta{d}", float(lead), cfg.tol("monic", 1e-8))
        ferr = 0.0
        for m in range(-10, 11):
            q = np.sum(K.weight_w1(x, d) * np.exp(-1j * m * x) * w) / (2 * np.pi)
            ferr = max(ferr, abs(q - K.fourier_coeff_w1(m, d)))
        rep.check(f"fourier_delta{d}", float(ferr), cfg.tol("fourier", 1e-10))
    return rep


@experiment("kernel-eval")
def kernel_eval(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("kernel-eval", cfg.echo())
    check = cfg.check or "identities"
    if check == "table":
        n = cfg.n or 10
        d = _deltas(cfg, [(0.5, 0.0)])[0]
        g = np.linspace(-np.pi, np.pi, 41)
        g = g[g != 0] if d.a < 0 else g
        T, U = np.meshgrid(g, g, indexing="ij")
        vals = K.kernel_tilde(n, d, T.ravel(), U.ravel())
        rep.tables["kernel"] = [{"theta": float(a), "tau": float(b), "value": float(v)}
                                for a, b, v in zip(T.ravel(), U.ravel(), vals)]
        rep.check("real_and_finite", float(np.all(np.isfinite(vals))), 1.0, passed=bool(np.all(np.isfinite(vals))))
        return rep
    if check != "identities":
        raise ValueError(f"kernel-eval has no check {check!r}")
    rng = make_rng(cfg.seed, 0)
    pool = [(0.3, 0.2), (-0.3, 0.5), (1.0, 0.0), (0.5, 0.3), (-0.45, -0.7)]
    worst = 0.0
    for _ in range(cfg.samples or 200):
        d = DeltaParameter.coerce(pool[int(rng.integers(len(pool)))])
        n = int(rng.integers(1, 11))
        th, ta = rng.uniform(-np.pi, np.pi, 2)
        s = K.kernel_finite(n, d, th, ta, "sum")
        c = K.kernel_finite(n, d, th, ta, "cd")
        worst = max(worst, abs(s - c) / (1 + abs(s)))
    rep.check("cd_vs_sum", worst, cfg.tol("cd", 1e-10))
    for d in _deltas(cfg, [(0.3, 0.2), (-0.3, 0.5), (1.0, 0.0)]):
        x, w = circle_rule(2 * d.a)
        err = max(abs(np.sum(K.one_point_density(n, d, x) * w) - n) for n in range(1, 9))
        rep.check(f"trace_delta{d}", float(err), cfg.tol("trace", 1e-6))
    n = cfg.nmax or 400
    d = DeltaParameter(0.5)
    ratio = float(np.real(K.kernel_finite(n, d, 0.0, 0.0)) / n ** (1 + 2 * d.a) / float(np.real(rgamma(2 * d.a + 2))))
    rep.statistics["K_n(1,1)_ratio"] = ratio
    rep.check(f"K_{n}(1,1)_scaling", abs(ratio - 1), cfg.tol("scaling", 0.02))
    return rep


_CORR_POINTS = [(0.5, 1.5), (-1.0, 2.0), (-2.5, -0.7), (0.9, 2.8)]


@experiment("kernel-limit")
def kernel_limit(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("kernel-limit", cfg.echo())
    check = cfg.check or "convergence"
    grid = np.linspace(-3.0, 3.0, 60)
    if check == "convergence":
        nmax = cfg.nmax or 400
        n_list = [n for n in (50, 100, 200, 400, 800, 1600) if n <= nmax]
        rows = []
        for d in _deltas(cfg, [(0.0, 0.0), (0.5, 0.0), (0.5, 0.3)]):
            sweep = K.convergence_sweep(d, grid, n_list)
            errs = [r["sup_error"] for r in sweep]
            for r in sweep:
                rows.append({"delta_a": d.a, "delta_b": d.b, **{k: v for k, v in r.items() if k != "argmax"}})
            rep.statistics[f"sweep_delta{d}"] = sweep
            mono = all(b <= a for a, b in zip(errs, errs[1:]))
            rep.check(f"monotone_delta{d}", errs, "non-increasing", passed=mono)
            rep.check(f"sup_error_n{n_list[-1]}_delta{d}", errs[-1], cfg.tol("sup", 1e-2))
            worst = 0.0
            for pts in _CORR_POINTS:
                lim = K.correlation_limit(d, pts)
                fin = K.correlation_finite_scaled(n_list[-1], d, pts)
                worst = max(worst, abs(fin - lim) / abs(lim))
            rep.check(f"two_point_rel_n{n_list[-1]}_delta{d}", worst, cfg.tol("corr", 0.02))
        rep.tables["convergence"] = rows
    elif check == "degenerations":
        g = grid
        T, U = np.meshgrid(g, g, indexing="ij")
        off = T != U
        sine = float(np.max(np.abs(K.limit_kernel_circle(T, U, 0.0) - K.sine_kernel(T, U))))
        rep.check("sine_delta0", sine, cfg.tol("sine", 1e-12))
        bes = float(np.max(np.abs(K.limit_kernel_circle(T[off], U[off], 0.7) - K.bessel_kernel(T[off], U[off], 0.7))))
        rep.check("bessel_delta0.7", bes, cfg.tol("bessel", 1e-8))
        for d in _deltas(cfg, [(0.5, 0.3), (-0.3, 0.5), (0.7, 0.0)]):
            lhs = 0.5 * T * U * K.limit_kernel_circle(T, U, d)
            rhs = K.limit_kernel_line(-2 / T, -2 / U, d)
            rep.check(f"circle_line_delta{d}", float(np.max(np.abs(lhs - rhs))), cfg.tol("line", 1e-10))
    else:
        raise ValueError(f"kernel-limit has no check {check!r}")
    return rep


@experiment("identities")
def identities(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("identities", cfg.echo())
    for name, (value, tol, ok) in run_identity_suite(make_rng(cfg.seed, 0)).items():
        rep.check(name, value, tol, passed=ok)
    return rep


@experiment("sample")
def sample(cfg: ExperimentConfig) -> ExperimentReport:
    rep = ExperimentReport("sample", cfg.echo())
    kind = {"u": "U", "so": "SO", "sp": "UH", "sn": "Sn", "wreath": "wreath", None: "U"}[cfg.group]
    n = cfg.n or 3
    m = cfg.samples or 10
    rng = make_rng(cfg.seed, 0)
    if cfg.delta is not None and kind == "U":
        M = sample_ewens_unitary(n, cfg.delta, rng, m)
    else:
        spec = GroupSpec(kind, n, "Z2" if kind == "wreath" else None)
        M = sample_haar(spec, rng, m)
    field = {"SO": FieldTag.R, "UH": FieldTag.H}.get(kind, FieldTag.C)
    rep.tables["samples"] = [{"matrix": matrix_to_json(x, field)} for x in M]
    rep.check("unitarity", max(unitarity_defect(x, field) for x in M), 1e-12)
    return rep


# -- orchestration -------------------------------------------------------------------

def run(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.experiment not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {cfg.experiment!r}; known: {sorted(EXPERIMENTS)}")
    t0 = time.perf_counter()
    rep = EXPERIMENTS[cfg.experiment](cfg)
    rep.wall_time = time.perf_counter() - t0
    if cfg.out:
        write_outputs(rep, cfg)
    return rep


def write_outputs(rep: ExperimentReport, cfg: ExperimentConfig) -> None:
    path = cfg.out
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    if cfg.format == "csv":
        if not rep.tables:
            raise ValueError(f"{rep.experiment} produced no tables for CSV output")
        base, ext = os.path.splitext(path)
        for i, (name, rows) in enumerate(rep.tables.items()):
            target = path if i == 0 else f"{base}_{name}{ext or '.csv'}"
            with open(target, "w", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
                writer.writeheader()
                writer.writerows(rows)
        return
    with open(path, "w") as fh:
        fh.write(rep.to_json(cfg.deterministic))
        fh.write("\n")
    if "samples" in rep.tables:
        with open(os.path.splitext(path)[0] + ".jsonl", "w") as fh:
            for row in rep.tables["samples"]:
                fh.write(json.dumps(row) + "\n")


# acceptance criteria as single experiment invocations
ACCEPTANCE: dict[int, tuple[str, dict]] = {
    1: ("exact splitting, R/C/H, n <= 8", {"experiment": "splitting-exact"}),
    2: ("law splitting U(5)", {"experiment": "splitting-law", "group": "u"}),
    3: ("law splitting SO(4) and U(2,H)", {"experiment": "splitting-law", "group": "so,sp"}),
    4: ("Ewens on S_n by enumeration", {"experiment": "ewens-enum", "group": "sn"}),
    5: ("Z2 wreath pushforward by enumeration", {"experiment": "ewens-enum", "group": "wreath"}),
    6: ("generalized Ewens moments on U(n)", {"experiment": "ewens-unitary", "check": "moments"}),
    7: ("OPUC orthogonality, monicity, Fourier", {"experiment": "opuc-orth"}),
    8: ("finite kernel identities", {"experiment": "kernel-eval", "check": "identities"}),
    9: ("limit kernel convergence", {"experiment": "kernel-limit", "check": "convergence"}),
    10: ("sine, Bessel and line degenerations", {"experiment": "kernel-limit", "check": "degenerations"}),
    11: ("eigenangle histogram vs K_3(theta,theta)", {"experiment": "ewens-unitary", "check": "spectral"}),
    12: ("2F1/1F1 identity suite", {"experiment": "identities"}),
}


def acceptance_config(number: int, seed: int = 1, **overrides) -> ExperimentConfig:
    _, kw = ACCEPTANCE[number]
    return ExperimentConfig(seed=seed, **{**kw, **overrides})


def run_acceptance(number: int, seed: int = 1, **overrides) -> ExperimentReport:
    return run(acceptance_config(number, seed, **overrides))
