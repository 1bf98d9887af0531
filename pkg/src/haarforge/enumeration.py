"""Exact enumeration oracles for the Chinese restaurant and Z2 wreath laws."""
from __future__ import annotations

import itertools
import math

import numpy as np

from .delta import DeltaParameter
from .laws import delta_weight, z2_wreath_step_probs
from .permutations import (Permutation, WreathElement, crp_step_probs, ewens_density,
                           permutation_from_crp_path, wreath_from_steps)


def all_permutations(n: int):
    return [Permutation(p) for p in itertools.permutations(range(n))]


def crp_pushforward(n: int, theta: float) -> dict[tuple[int, ...], float]:
    """Exact law of crp_permutation by summing analytic path probabilities."""
    probs = [crp_step_probs(k, theta) for k in range(1, n)]
    out: dict[tuple[int, ...], float] = {}
    for ms in itertools.product(*[range(k + 1) for k in range(1, n)]):
        p = math.prod(float(probs[k - 1][m]) for k, m in enumerate(ms, start=1))
        key = permutation_from_crp_path(ms).images
        out[key] = out.get(key, 0.0) + p
    return out


def enumerate_sn_check(n: int, theta: float) -> dict:
    if not 1 <= n <= 5:
        raise ValueError("enumeration supports 1 <= n <= 5")
    law = crp_pushforward(n, theta)
    dev = max(abs(law.get(s.images, 0.0) - ewens_density(s, theta)) for s in all_permutations(n))
    return {"n": n, "theta": theta, "max_deviation": dev, "total_mass": sum(law.values()),
            "support": len(law)}


def z2_wreath_pushforward_steps(n: int, delta) -> dict[tuple[int, ...], float]:
    """sigma-marginal of the delta-biased Z2 wr S_n law from the analytic step weights."""
    tables = [z2_wreath_step_probs(n - k, delta) for k in range(n)]
    out: dict[tuple[int, ...], float] = {}
    choices = [list(itertools.product(range(n - k), range(2))) for k in range(n)]
    for path in itertools.product(*choices):
        p = math.prod(float(tables[k][off, e]) for k, (off, e) in enumerate(path))
        if p == 0.0:
            continue
        ms = [k + off for k, (off, _) in enumerate(path)]
        eps = [1.0 if e == 0 else -1.0 for _, e in path]
        key = wreath_from_steps(ms, eps).sigma.images
        out[key] = out.get(key, 0.0) + p
    return out


def wreath_eigenvalues(w: WreathElement) -> np.ndarray:
    """Eigenvalues of (f; sigma): the l-th roots of w(f; c) for each cycle c of length l."""
    vals = []
    for cyc in w.sigma.cycles():
        l = len(cyc)
        c = w.cycle_weight(cyc)
        base = np.angle(c) / l
        vals.extend(np.exp(1j * (base + 2 * np.pi * np.arange(l) / l)))
    return np.array(vals)


def z2_wreath_pushforward_det(n: int, delta) -> dict[tuple[int, ...], float]:
    """sigma-marginal of det_delta(g) dHaar(g) over all 2^n n! elements of Z2 wr S_n."""
    d = DeltaParameter.coerce(delta)
    out: dict[tuple[int, ...], float] = {}
    total = 0.0
    for sigma in all_permutations(n):
        for signs in itertools.product((1.0, -1.0), repeat=n):
            w = WreathElement(signs, sigma)
            lam = wreath_eigenvalues(w)
            # eigenvalue exactly 1 gives weight 0 for a > 0
            hit = np.isclose(lam, 1.0, atol=1e-12)
            wt = 0.0 if np.any(hit) else float(np.prod(delta_weight(lam, d)))
            out[sigma.images] = out.get(sigma.images, 0.0) + wt
            total += wt
    return {k: v / total for k, v in out.items()}


def enumerate_wreath_check(n: int, delta, method: str = "steps") -> dict:
    """Max deviation of the Z2 wr S_n pushforward from Ewens(2^{2 delta - 1})."""
    if not 1 <= n <= 4:
        raise ValueError("enumeration supports 1 <= n <= 4")
    d = DeltaParameter.coerce(delta)
    theta = 2.0 ** (2 * d.a - 1)
    law = z2_wreath_pushforward_steps(n, d) if method == "steps" else z2_wreath_pushforward_det(n, d)
    dev = max(abs(law.get(s.images, 0.0) - ewens_density(s, theta)) for s in all_permutations(n))
    return {"n": n, "delta": [d.a, d.b], "theta": theta, "method": method, "max_deviation": dev,
            "total_mass": sum(law.values())}
