"""Determinant splitting, factor laws and delta-biased (generalized Ewens) samplers.

For G = R_0 (Id_1 + R_1) ... (Id_{n-1} + R_{n-1}) with reflections R_k,

    det(Id - G) = prod_k (1 - gamma_k),    gamma_k = <e_1, R_k e_1>,

and over H the same holds for det(Id - Phi(G)) with factors det(Id_2 - phi(gamma_k)).
Under Haar measure the gamma_k are independent, which gives the factor
samplers below.  Biasing each step by |1 - gamma|^{2a} e^{2b arg(1 - gamma)}
gives the generalized Ewens measure det_delta(U) dHaar(U) (normalized).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .delta import DeltaParameter
from .errors import ConvergenceError, DomainError, SingularityError
from .groups import (FieldTag, GroupSpec, Reflection, apply_reflection, basis_vector,
                     haar_from_pivots, reflection_product, reflection_to, sample_haar, sample_sphere)
from .permutations import WreathElement, ewens_density, wreath_from_steps  # noqa: F401
from .quadrature import _jacobi, circle_rule, composite, graded_rule
from .quaternion import embed_quaternion, phi, qreal

__all__ = [
    "FactorSample", "det_split_exact", "random_reflections", "reflection_coefficients",
    "sample_factors_unitary", "sample_factors_so2n", "sample_factors_symplectic",
    "sample_factors_wreath", "delta_weight", "delta_weight_branch", "det_delta",
    "det_delta_from_gammas", "sample_biased_coefficient", "sample_ewens_unitary",
    "ewens_density", "z2_wreath_step_probs", "sample_z2_wreath_delta", "mellin_moment",
    "mellin_moment_closed",
]


@dataclass
class FactorSample:
    """Per-step factors of det(Id - G); ``factors`` has shape (size, n)."""

    factors: np.ndarray
    product: np.ndarray = field(init=False)

    def __post_init__(self):
        self.factors = np.atleast_2d(np.asarray(self.factors))
        self.product = np.prod(self.factors, axis=1)

    def to_json(self) -> list[dict]:
        out = []
        for row, p in zip(self.factors, self.product):
            out.append({
                "factors": [[float(np.real(v)), float(np.imag(v))] for v in row],
                "product": [float(np.real(p)), float(np.imag(p))],
            })
        return out


# -- exact splitting --------------------------------------------------------

def reflection_coefficients(reflections: Sequence[Reflection]):
    """gamma_k = <e_1, R_k e_1> for each reflection (quaternions as (4,) arrays)."""
    out = []
    for R in reflections:
        e1 = basis_vector(R.dim, 0, R.field)
        out.append(apply_reflection(R, e1)[0])
    return out


def det_split_exact(reflections: Sequence[Reflection], field=None):
    """(lhs, rhs): the full determinant det(Id - G) and the factor product.

    Over H both sides are taken on the complex embedding, with factors
    det(Id_2 - phi(gamma_k)).
    """
    field = FieldTag.parse(field if field is not None else reflections[0].field)
    G = reflection_product(reflections)
    n = len(reflections)
    gammas = reflection_coefficients(reflections)
    if field is FieldTag.H:
        lhs = complex(np.linalg.det(np.eye(2 * n) - embed_quaternion(G)))
        rhs = complex(np.prod([np.linalg.det(np.eye(2) - phi(g)) for g in gammas]))
    else:
        lhs = complex(np.linalg.det(np.eye(n) - G))
        rhs = complex(np.prod([1 - g for g in gammas]))
    return lhs, rhs


def random_reflections(n: int, field, rng: np.random.Generator, *, general: bool = True,
                       p_identity: float = 0.05) -> list[Reflection]:
    """Random reflections R_k acting on K^{n-k}.

    With ``general`` the direction a and the eigenvalue lam are random (lam a
    unit scalar, +-1 over R); otherwise R_k = reflection_to(uniform sphere point).
    """
    field = FieldTag.parse(field)
    out = []
    for k in range(n):
        d = n - k
        if rng.random() < p_identity:
            out.append(Reflection.identity(d, field))
            continue
        if not general:
            out.append(reflection_to(sample_sphere(d, field, rng), field))
            continue
        if field is FieldTag.R:
            a = rng.standard_normal(d)
            lam = float(rng.choice([-1.0, 1.0]))
        elif field is FieldTag.C:
            a = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            lam = np.exp(1j * rng.uniform(-np.pi, np.pi))
        else:
            a = rng.standard_normal((d, 4))
            q = rng.standard_normal(4)
            lam = q / np.linalg.norm(q)
        out.append(Reflection(d, a, lam, field))
    return out


# -- factor laws under Haar ---------------------------------------------------

def sample_factors_unitary(n: int, rng: np.random.Generator, size: int = 1) -> FactorSample:
    """1 - e^{i w_k} sqrt(B_{1,k-1}), k = 1..n, with B_{1,0} = 1."""
    cols = []
    for k in range(1, n + 1):
        B = np.ones(size) if k == 1 else rng.beta(1.0, k - 1.0, size=size)
        w = rng.uniform(-np.pi, np.pi, size=size)
        cols.append(1 - np.exp(1j * w) * np.sqrt(B))
    return FactorSample(np.stack(cols, axis=1))


def sample_factors_so2n(n: int, rng: np.random.Generator, size: int = 1) -> FactorSample:
    """det(Id_{2n} - G), G Haar on SO(2n): 2 prod_{k=2}^{2n} (1 - eps_k sqrt(B_{1/2,(k-1)/2})).

    The leading 2 is stored as the first factor (the 1 x 1 step, whose
    pivot is forced to -1).
    """
    cols = [np.full(size, 2.0)]
    for k in range(2, 2 * n + 1):
        B = rng.beta(0.5, 0.5 * (k - 1), size=size)
        eps = rng.choice(np.array([-1.0, 1.0]), size=size)
        cols.append(1 - eps * np.sqrt(B))
    return FactorSample(np.stack(cols, axis=1))


def sample_factors_symplectic(n: int, rng: np.random.Generator, size: int = 1,
                              form: str = "sphere") -> FactorSample:
    """det(Id_{2n} - Phi(G)), G Haar on U(n, H), as a product of n factors.

    ``form="sphere"``: (a-1)^2 + b^2 + c^2 + d^2 from the first four
    coordinates of a uniform point on S^{4k-1}.
    ``form="beta"``: (1 + eps sqrt(B_{1/2,2k-1/2}))^2 + (1 - B_{1/2,2k-1/2}) B'_{3/2,2k-2}.
    """
    cols = []
    for k in range(1, n + 1):
        if form == "sphere":
            g = rng.standard_normal((size, 4 * k))
            x = g[:, :4] / np.linalg.norm(g, axis=1, keepdims=True)
            cols.append((x[:, 0] - 1) ** 2 + np.sum(x[:, 1:] ** 2, axis=1))
        elif form == "beta":
            B = rng.beta(0.5, 2 * k - 0.5, size=size)
            Bp = np.ones(size) if k == 1 else rng.beta(1.5, 2 * k - 2.0, size=size)
            eps = rng.choice(np.array([-1.0, 1.0]), size=size)
            cols.append((1 + eps * np.sqrt(B)) ** 2 + (1 - B) * Bp)
        else:
            raise ValueError("form must be 'sphere' or 'beta'")
    return FactorSample(np.stack(cols, axis=1))


def _sample_unit(F: str, rng: np.random.Generator, size) -> np.ndarray:
    if F == "trivial":
        return np.ones(size, dtype=complex)
    if F == "Z2":
        return rng.choice(np.array([1.0, -1.0]), size=size).astype(complex)
    if F == "T":
        return np.exp(1j * rng.uniform(-np.pi, np.pi, size=size))
    raise ValueError(f"unknown F {F!r}")


def sample_factors_wreath(n: int, F: str, rng: np.random.Generator, size: int = 1) -> FactorSample:
    """prod_{j=1}^n (1 - eps_j 1{X_j != 0}), P(X_j != 0) = 1/j, eps_j ~ uniform on F."""
    cols = []
    for j in range(1, n + 1):
        hit = rng.random(size) < 1.0 / j
        eps = _sample_unit(F, rng, size)
        cols.append(np.where(hit, 1 - eps, 1.0 + 0j))
    return FactorSample(np.stack(cols, axis=1))


# -- delta weights ------------------------------------------------------------

def delta_weight(gamma, delta):
    """|1 - gamma|^{2a} e^{2b arg(1 - gamma)}, the real form of (1-gamma)^{conj d} (1-conj gamma)^d."""
    d = DeltaParameter.coerce(delta)
    g = np.asarray(gamma, dtype=complex)
    w = 1 - g
    r = np.abs(w)
    if d.a < 0 and np.any(r == 0):
        raise SingularityError("delta weight is singular at gamma = 1 for a < 0")
    if d.a == 0:
        mod = np.ones(r.shape)
    else:
        mod = r ** (2 * d.a)
    out = mod * np.exp(2 * d.b * np.angle(w))
    return out[()] if out.ndim == 0 else out


def delta_weight_branch(gamma, delta):
    """Principal-branch (1 - gamma)^{conj d} (1 - conj gamma)^d, returned complex."""
    d = DeltaParameter.coerce(delta)
    g = np.asarray(gamma, dtype=complex)
    w = 1 - g
    if d.a < 0 and np.any(w == 0):
        raise SingularityError("delta weight is singular at gamma = 1 for a < 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.log(w)
        out = np.exp(d.conj * L + d.value * np.conj(L))
    out = np.where(w == 0, 0.0 if d.a > 0 else 1.0, out)
    return out[()] if out.ndim == 0 else out


def det_delta(G, delta, method: str = "eigen"):
    """det(Id - G)^{conj d} det(Id - conj G)^d for a unitary G.

    ``method="eigen"`` (normative) multiplies delta_weight over the
    eigenvalues.  ``method="det"`` applies the principal branch to det(Id - G)
    directly; it agrees with the eigenvalue form whenever the arguments of the
    factors 1 - e^{i theta_j} do not sum outside (-pi, pi], and always when b = 0.
    """
    d = DeltaParameter.coerce(delta)
    G = np.asarray(G, dtype=complex)
    if method == "eigen":
        lam = np.linalg.eigvals(G)
        return float(np.prod(delta_weight(lam, d), axis=-1))
    if method == "det":
        D = np.linalg.det(np.eye(G.shape[-1]) - G)
        if d.a < 0 and np.any(D == 0):
            raise SingularityError("1 is an eigenvalue")
        return float(np.real(delta_weight_branch(1 - D, d)))
    raise ValueError("method must be 'eigen' or 'det'")


def det_delta_from_gammas(gammas, delta):
    """prod_k delta_weight(gamma_k); equals det_delta of the reflection product."""
    return np.prod(delta_weight(gammas, delta), axis=-1)


# -- biased coefficient sampling ---------------------------------------------

_GRID_HALF = 2 ** 15


@lru_cache(maxsize=32)
def _circle_cdf(a: float, b: float):
    """Graded grid theta_j = sgn(t) pi |t|^{3/2} on 2^16 cells and the CDF of w1 on it."""
    t = np.linspace(-1.0, 1.0, 2 * _GRID_HALF + 1)
    theta = np.sign(t) * np.pi * np.abs(t) ** 1.5
    order = 8
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = theta[:-1], theta[1:]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = (4 * np.sin(0.5 * nodes) ** 2) ** a * np.exp(-b * (np.pi * np.sign(nodes) - nodes))
    mass = (vals * w[None, :]).sum(axis=1) * half
    # the two cells touching 0 carry |theta|^{2a}; integrate them with the power built in
    xj, wj = _jacobi(16, 2 * a)
    h = theta[_GRID_HALF + 1]
    u = 0.5 * h * (xj + 1)
    smooth = (np.sinc(u / (2 * np.pi)) ** 2) ** a  # (4 sin^2(u/2) / u^2)^a
    base = np.sum(wj * smooth) * (0.5 * h) ** (1 + 2 * a)
    mass[_GRID_HALF] = base * np.sum(wj * smooth * np.exp(-b * (np.pi - u))) / np.sum(wj * smooth)
    mass[_GRID_HALF - 1] = base * np.sum(wj * smooth * np.exp(b * (np.pi - u))) / np.sum(wj * smooth)
    cdf = np.concatenate([[0.0], np.cumsum(mass)])
    total = cdf[-1]
    return theta, cdf / total


def _sample_circle(d: DeltaParameter, rng: np.random.Generator, size: int) -> np.ndarray:
    theta, cdf = _circle_cdf(d.a, d.b)
    u = rng.random(size)
    j = np.clip(np.searchsorted(cdf, u, side="right") - 1, 0, len(theta) - 2)
    frac = (u - cdf[j]) / np.maximum(cdf[j + 1] - cdf[j], 1e-300)
    lo, hi = theta[j], theta[j + 1]
    out = lo + frac * (hi - lo)
    # inside the cells adjacent to 0 invert the local |theta|^{2a} law exactly
    p = 1.0 / (1.0 + 2 * d.a)
    right = j == _GRID_HALF
    left = j == _GRID_HALF - 1
    out[right] = hi[right] * frac[right] ** p
    out[left] = lo[left] * (1 - frac[left]) ** p
    return out


def _disk_first_coordinate(d: int, rng: np.random.Generator, size: int) -> np.ndarray:
    r = np.sqrt(rng.beta(1.0, d - 1.0, size=size))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, size=size))


def sample_biased_coefficient(sphere_dim: int, delta, rng: np.random.Generator, size: int = 1,
                              *, pool: int = 64) -> np.ndarray:
    """gamma with law proportional to delta_weight(gamma) times the law of <e_1, x>, x uniform on S(C^d).

    d = 1: gamma = e^{i theta}, theta drawn by inverse CDF of w1 on a graded grid.
    d >= 2, a >= 0: exact rejection with envelope 2^{2a} e^{pi |b|}.
    d >= 2, a < 0: sampling-importance-resampling with ``pool`` proposals per draw.
    """
    d = DeltaParameter.coerce(delta)
    if sphere_dim < 1:
        raise ValueError("sphere_dim must be >= 1")
    if sphere_dim == 1:
        if d.a == 0 and d.b == 0:
            return np.exp(1j * rng.uniform(-np.pi, np.pi, size=size))
        return np.exp(1j * _sample_circle(d, rng, size))
    if d.a == 0 and d.b == 0:
        return _disk_first_coordinate(sphere_dim, rng, size)
    if d.a >= 0:
        bound = 2.0 ** (2 * d.a) * np.exp(np.pi * abs(d.b))
        out = np.empty(size, dtype=complex)
        todo = np.arange(size)
        while todo.size:
            g = _disk_first_coordinate(sphere_dim, rng, todo.size)
            ok = rng.random(todo.size) * bound < delta_weight(g, d)
            out[todo[ok]] = g[ok]
            todo = todo[~ok]
        return out
    g = _disk_first_coordinate(sphere_dim, rng, size * pool).reshape(size, pool)
    w = delta_weight(g, d)
    cw = np.cumsum(w, axis=1)
    u = rng.random(size) * cw[:, -1]
    idx = (cw < u[:, None]).sum(axis=1)
    return g[np.arange(size), np.minimum(idx, pool - 1)]


def sample_ewens_unitary(n: int, delta, rng: np.random.Generator, size: int | None = None,
                         *, pool: int = 64, return_gammas: bool = False):
    """U(n, C) sample from det_delta(U) dHaar(U) / E[det_delta], built from biased pivots."""
    d = DeltaParameter.coerce(delta)
    B = 1 if size is None else size
    pivots, gammas = [], []
    for k in range(n):
        dim = n - k
        g = sample_biased_coefficient(dim, d, rng, B, pool=pool)
        x = np.empty((B, dim), dtype=complex)
        x[:, 0] = g
        if dim > 1:
            u = sample_sphere(dim - 1, FieldTag.C, rng, B)
            x[:, 1:] = np.sqrt(np.maximum(0.0, 1 - np.abs(g) ** 2))[:, None] * u
        pivots.append(x)
        gammas.append(g)
    M = haar_from_pivots(pivots, FieldTag.C)
    if size is None:
        M = M[0]
    if return_gammas:
        G = np.stack(gammas, axis=1)
        return M, (G[0] if size is None else G)
    return M


# -- delta-biased Z2 wreath S_n ----------------------------------------------

def z2_wreath_step_probs(dim: int, delta) -> np.ndarray:
    """Biased law of one step on 2*dim options: rows = target offset m - k, columns eps in (+1, -1).

    gamma is eps on the diagonal hit and 0 otherwise, so the weights are 1,
    except 2^{2a} for (hit, -1) and 0 for (hit, +1).
    """
    d = DeltaParameter.coerce(delta)
    if d.b != 0 or d.a <= 0:
        raise DomainError("Z2 wreath biasing needs real delta > 0")
    w = np.ones((dim, 2))
    w[0, 0] = delta_weight(1.0 + 0j, d)
    w[0, 1] = delta_weight(-1.0 + 0j, d)
    return w / w.sum()


def sample_z2_wreath_delta(n: int, delta, rng: np.random.Generator) -> WreathElement:
    """delta-biased element of Z2 wr S_n; its S_n marginal is Ewens(2^{2 delta - 1})."""
    ms, eps = [], []
    for k in range(n):
        p = z2_wreath_step_probs(n - k, delta).ravel()
        i = int(rng.choice(p.size, p=p))
        ms.append(k + i // 2)
        eps.append(1.0 if i % 2 == 0 else -1.0)
    return wreath_from_steps(ms, eps)


# -- Mellin moments ------------------------------------------------------------

def _factor_moment(k: int, s: float, order: int, levels: int) -> float:
    # E|1 - e^{iw} r|^{2s}, r^2 ~ Beta(1, k-1) (r = 1 for k = 1)
    th, wth = circle_rule(2 * s, order=order, levels=levels)
    if k == 1:
        return float(np.sum((4 * np.sin(0.5 * th) ** 2) ** s * wth) / (2 * np.pi))
    r, wr = graded_rule(0.0, 1.0, 0.0, toward="hi", order=order, levels=levels)
    dens = 2 * (k - 1) * r * (1 - r * r) ** (k - 2)
    # |1 - r e^{iw}|^2 = (1 - r)^2 + 4 r sin^2(w/2)
    val = ((1 - r[:, None]) ** 2 + 4 * r[:, None] * np.sin(0.5 * th[None, :]) ** 2) ** s
    inner = val @ wth / (2 * np.pi)
    return float(np.sum(inner * dens * wr))


def mellin_moment(n: int, s: float, *, rtol: float = 1e-9) -> float:
    """E_Haar |det(Id - U)|^{2s} on U(n, C) from 1-d factor quadratures.

    Each factor is integrated at two resolutions; ConvergenceError if they
    differ by more than ``rtol``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if s < 0:
        raise DomainError("s must be >= 0")
    if s == 0:
        return 1.0
    out = 1.0
    for k in range(1, n + 1):
        lo = _factor_moment(k, s, 20, 10)
        hi = _factor_moment(k, s, 30, 14)
        if abs(hi - lo) > rtol * abs(hi):
            raise ConvergenceError(f"factor {k} moment unresolved: {lo} vs {hi}")
        out *= hi
    return out


def mellin_moment_closed(n: int, s: float) -> float:
    """prod_k Gamma(k) Gamma(k + 2s) / Gamma(k + s)^2."""
    k = np.arange(1, n + 1)
    return float(np.exp(np.sum(gammaln(k) + gammaln(k + 2 * s) - 2 * gammaln(k + s))))


def sample_haar_unitary(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    return sample_haar(GroupSpec("U", n), rng, size)
