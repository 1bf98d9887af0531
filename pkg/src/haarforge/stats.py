"""Small Monte Carlo statistics helpers."""
from __future__ import annotations

import numpy as np
from scipy import stats as _st


def ks_two_sample(a, b) -> float:
    """sup |F_a - F_b| of the two empirical CDFs."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_two_sample needs non-empty samples")
    return float(_st.ks_2samp(a, b).statistic)


def ks_one_sample(x, cdf) -> float:
    x = np.asarray(x, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("empty sample")
    return float(_st.kstest(x, cdf).statistic)


def mean_se(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size))


def self_normalized_is(values, weights) -> tuple[float, float]:
    """sum w f / sum w with its delta-method standard error."""
    f = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    W = w.sum()
    est = float(np.sum(w * f) / W)
    se = float(np.sqrt(np.sum(w ** 2 * (f - est) ** 2)) / W)
    return est, se


def z_score(est1: float, se1: float, est2: float, se2: float, *, atol: float = 1e-10) -> float:
    """Standardized difference of two estimates.

    A statistic that is constant on the sample space (both standard errors at
    roundoff level) has no sampling noise: the means are then compared
    directly, giving 0 when they agree to ``atol`` and inf otherwise.
    """
    se = float(np.hypot(se1, se2))
    scale = 1.0 + abs(est1) + abs(est2)
    if se <= 1e-12 * scale:
        return 0.0 if abs(est1 - est2) <= atol * scale else float("inf")
    return float((est1 - est2) / se)


def binned_counts(samples, edges) -> np.ndarray:
    """Per-sample bin counts: ``samples`` is (N, m); returns (N, bins)."""
    samples = np.atleast_2d(samples)
    N = samples.shape[0]
    idx = np.clip(np.searchsorted(edges, samples, side="right") - 1, 0, len(edges) - 2)
    out = np.zeros((N, len(edges) - 1))
    rows = np.repeat(np.arange(N), samples.shape[1])
    np.add.at(out, (rows, idx.ravel()), 1.0)
    return out
