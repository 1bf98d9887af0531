"""Composite Gauss rules, including ones graded toward an algebraic endpoint singularity.

A rule is a pair (nodes, weights) of 1-d arrays; ``f(nodes) @ weights``
approximates the integral.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi


@lru_cache(maxsize=64)
def _leggauss(order: int):
    return np.polynomial.legendre.leggauss(order)


@lru_cache(maxsize=64)
def _jacobi(order: int, beta: float):
    # weight (1 + x)^beta on [-1, 1]
    return roots_jacobi(order, 0.0, beta)


def gauss_legendre(order: int, lo: float, hi: float):
    x, w = _leggauss(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def composite(breaks, order: int = 20):
    breaks = np.asarray(breaks, dtype=float)
    xs, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        x, w = gauss_legendre(order, lo, hi)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def graded_rule(lo: float, hi: float, exponent: float = 0.0, *, toward: str = "lo",
                ratio: float = 0.2, levels: int = 12, order: int = 24, max_width: float = 0.5):
    """Rule on [lo, hi] for integrands behaving like |x - x0|^exponent * smooth.

    Panels shrink geometrically toward the endpoint x0 (``toward`` = "lo" or
    "hi"); the innermost panel uses Gauss-Jacobi with the power built in, so
    the result is exact up to the smooth factor.
    """
    L = hi - lo
    d = L * ratio ** np.arange(levels, -1, -1)  # distances from x0, increasing
    outer = np.linspace(d[-1] * ratio, L, max(2, int(np.ceil(L * (1 - ratio) / max_width)) + 1))
    dist = np.unique(np.concatenate([d[:-1], outer]))
    dist = dist[dist > 0]
    xs, ws = composite(dist, order)
    # innermost panel [0, dist[0]] with the singular power
    xj, wj = _jacobi(order, float(exponent))
    h = dist[0]
    x0 = 0.5 * h * (xj + 1.0)
    w0 = wj * (0.5 * h) ** (1.0 + exponent) / np.where(x0 > 0, x0, 1.0) ** exponent
    dists = np.concatenate([x0, xs])
    weights = np.concatenate([w0, ws])
    nodes = lo + dists if toward == "lo" else hi - dists
    order_idx = np.argsort(nodes)
    return nodes[order_idx], weights[order_idx]


def circle_rule(exponent: float = 0.0, *, singular_at: float = 0.0, **kw):
    """Rule on [-pi, pi] graded on both sides of ``singular_at`` (0 or pi).

    For ``singular_at=pi`` the singularity sits at the two edges.  Nodes there
    cannot resolve their distance to +-pi below ~1e-16 * pi, so the grading
    stops earlier; the Gauss-Jacobi end panel still carries the power exactly.
    """
    if singular_at != 0.0:
        kw.setdefault("levels", 2)
    if singular_at == 0.0:
        xl, wl = graded_rule(-np.pi, 0.0, exponent, toward="hi", **kw)
        xr, wr = graded_rule(0.0, np.pi, exponent, toward="lo", **kw)
    else:
        xl, wl = graded_rule(-np.pi, 0.0, exponent, toward="lo", **kw)
        xr, wr = graded_rule(0.0, np.pi, exponent, toward="hi", **kw)
    return np.concatenate([xl, xr]), np.concatenate([wl, wr])


def line_rule(L: float = 1e3, *, order: int = 30, base: float = 0.25):
    """Rule on [-L, L] with panels growing geometrically in |x|."""
    pos = [0.0]
    x = base
    while x < L:
        pos.append(x)
        x *= 1.6
    pos.append(L)
    xr, wr = composite(pos, order)
    return np.concatenate([-xr[::-1], xr]), np.concatenate([wr[::-1], wr])
