"""Field-generic reflections, sphere sampling and recursive Haar generation.

Vectors over R and C are 1-d float/complex arrays; over H they carry a
trailing axis of length 4 (see :mod:`haarforge.quaternion`).  Inner products
are conjugate-linear in the first slot and quaternion vectors form a right
module, so ``<a, y q> = <a, y> q``.

A Haar element of a group G in U(n, K) is produced as the product
``R_0 (Id_1 + R_1) ... (Id_{n-1} + R_{n-1})`` where ``R_k`` is the reflection
of the trailing (n-k)-block sending its first basis vector onto a pivot ``x_k``
drawn from the orbit of that vector under the stabilizer H_k.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError
from .quaternion import qabs2, qconj, qinv, qmatmul, qmul, qreal

_DEGENERATE_TOL = 1e-14


class FieldTag(enum.Enum):
    R = "R"
    C = "C"
    H = "H"

    @classmethod
    def parse(cls, value) -> "FieldTag":
        if isinstance(value, FieldTag):
            return value
        return cls(str(value).upper())


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent, reproducible generator for the pair (seed, stream)."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(stream),)))


# -- field arithmetic -------------------------------------------------------

def _conj(x, field: FieldTag):
    if field is FieldTag.H:
        return qconj(x)
    if field is FieldTag.C:
        return np.conj(x)
    return x


def _mul(x, y, field: FieldTag):
    if field is FieldTag.H:
        return qmul(x, y)
    return x * y


def inner(a, y, field) -> complex | float | np.ndarray:
    """<a, y> = sum_i conj(a_i) y_i over the first (vector) axis."""
    field = FieldTag.parse(field)
    a = np.asarray(a)
    y = np.asarray(y)
    if field is FieldTag.H:
        extra = y.ndim - a.ndim
        ac = qconj(a).reshape(a.shape[:1] + (1,) * extra + (4,))
        return qmul(ac, y).sum(axis=0)
    extra = y.ndim - a.ndim
    return (_conj(a, field).reshape(a.shape + (1,) * extra) * y).sum(axis=0)


def vnorm2(x, field) -> float:
    field = FieldTag.parse(field)
    x = np.asarray(x)
    if field is FieldTag.H:
        return float(qabs2(x).sum())
    return float(np.sum(np.abs(x) ** 2))


def identity(n: int, field) -> np.ndarray:
    field = FieldTag.parse(field)
    if field is FieldTag.H:
        out = np.zeros((n, n, 4))
        out[np.arange(n), np.arange(n), 0] = 1.0
        return out
    return np.eye(n, dtype=complex if field is FieldTag.C else float)


def basis_vector(n: int, k: int, field) -> np.ndarray:
    return identity(n, field)[:, k].copy()


def matmul(A, B, field) -> np.ndarray:
    field = FieldTag.parse(field)
    if field is FieldTag.H:
        return qmatmul(A, B)
    return A @ B


def adjoint(A, field) -> np.ndarray:
    field = FieldTag.parse(field)
    if field is FieldTag.H:
        return qconj(np.swapaxes(A, -2, -3))
    return np.conj(np.swapaxes(A, -1, -2))


def unitarity_defect(M, field) -> float:
    """Max-entry norm of M* M - Id."""
    field = FieldTag.parse(field)
    n = M.shape[-2] if field is not FieldTag.H else M.shape[-3]
    D = matmul(adjoint(M, field), M, field) - identity(n, field)
    return float(np.max(np.abs(D)))


# -- reflections ------------------------------------------------------------

@dataclass(frozen=True)
class Reflection:
    """s_{a,lam}(y) = y - a (1 - lam) <a, y> / |a|^2 on K^dim; ``a=None`` is the identity."""

    dim: int
    a: np.ndarray | None
    lam: complex | float | np.ndarray
    field: FieldTag = FieldTag.C

    @property
    def is_identity(self) -> bool:
        return self.a is None

    @classmethod
    def identity(cls, dim: int, field=FieldTag.C) -> "Reflection":
        field = FieldTag.parse(field)
        lam = qreal(1.0) if field is FieldTag.H else 1.0
        return cls(dim, None, lam, field)

    def matrix(self) -> np.ndarray:
        return apply_reflection(self, identity(self.dim, self.field))


def apply_reflection(R: Reflection, y) -> np.ndarray:
    """Apply R to a vector, or columnwise to a matrix with the vector axis first.

    Scalars are multiplied in the order a * ((1 - lam) * <a, y>) / |a|^2,
    which matters over H.
    """
    y = np.asarray(y)
    if y.shape[0] != R.dim:
        raise DimensionError(f"vector of length {y.shape[0]} for reflection of dim {R.dim}")
    if R.a is None:
        return y.copy()
    field = R.field
    a = np.asarray(R.a)
    ip = inner(a, y, field)
    n2 = vnorm2(a, field)
    if field is FieldTag.H:
        one_minus = qreal(1.0) - np.asarray(R.lam, dtype=float)
        s = qmul(one_minus, ip)
        extra = y.ndim - a.ndim
        aa = a.reshape(a.shape[:1] + (1,) * extra + (4,))
        return y - qmul(aa, s[None]) / n2
    s = (1 - R.lam) * ip
    extra = y.ndim - a.ndim
    return y - a.reshape(a.shape + (1,) * extra) * s / n2


def _one_minus_first(x, field: FieldTag):
    """1 - x_1 for unit vectors x (vector axis -1, or -2 over H) without
    cancellation when x_1 is near 1: 1 - Re x_1 = (|Im x_1|^2 + |x'|^2) / (1 + Re x_1)."""
    x = np.asarray(x)
    if field is FieldTag.H:
        x1 = x[..., 0, :]
        re = x1[..., 0]
        rest = np.sum(x1[..., 1:] ** 2, axis=-1) + np.sum(x[..., 1:, :] ** 2, axis=(-2, -1))
        out = -x1.copy()
        out[..., 0] = np.where(re > 0, rest / (1 + np.abs(re)), 1 - re)
        return out
    x1 = x[..., 0]
    re = np.real(x1)
    rest = np.imag(x1) ** 2 + np.sum(np.abs(x[..., 1:]) ** 2, axis=-1)
    real_part = np.where(re > 0, rest / (1 + np.abs(re)), 1 - re)
    if field is FieldTag.R:
        return real_part
    return real_part - 1j * np.imag(x1)


def reflection_to(x, field=FieldTag.C) -> Reflection:
    """The reflection sending e_1 onto the unit vector x.

    Uses a = e_1 - x and lam = -(1 - x_1)(1 - conj(x_1))^{-1}; when x is within
    1e-14 of e_1 the identity is returned.
    """
    field = FieldTag.parse(field)
    x = np.asarray(x, dtype=float if field is not FieldTag.C else complex)
    dim = x.shape[0]
    if abs(vnorm2(x, field) - 1.0) > 1e-10:
        raise DomainError("reflection_to needs a unit vector")
    a = -x.copy()
    a[0] = _one_minus_first(x, field)
    if field is FieldTag.H:
        one_minus_x1 = a[0]
        if np.sqrt(qabs2(one_minus_x1)) < _DEGENERATE_TOL:
            return Reflection.identity(dim, field)
        lam = -qmul(one_minus_x1, qinv(qconj(one_minus_x1)))
        return Reflection(dim, a, lam, field)
    one_minus_x1 = a[0]
    if abs(one_minus_x1) < _DEGENERATE_TOL:
        return Reflection.identity(dim, field)
    lam = -one_minus_x1 / np.conj(one_minus_x1)
    if field is FieldTag.R:
        lam = float(np.real(lam))
    return Reflection(dim, a, lam, field)


def embed_block(M, n: int, field) -> np.ndarray:
    """Id_{n-d} (+) M for a d x d matrix M."""
    field = FieldTag.parse(field)
    d = M.shape[0]
    out = identity(n, field)
    out[n - d:, n - d:] = M
    return out


def reflection_product(reflections: Sequence[Reflection]) -> np.ndarray:
    """R_0 (Id_1 (+) R_1) ... (Id_{n-1} (+) R_{n-1}) with reflections[k] of dim n-k."""
    n = len(reflections)
    field = reflections[0].field
    M = identity(n, field)
    for k in range(n - 1, -1, -1):
        R = reflections[k]
        if R.dim != n - k:
            raise DimensionError(f"reflection {k} has dim {R.dim}, expected {n - k}")
        M[k:] = apply_reflection(R, M[k:])
    return M


# -- sampling ---------------------------------------------------------------

def sample_sphere(k: int, field, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Uniform point on the unit sphere of K^k (normalized Gaussian vector)."""
    field = FieldTag.parse(field)
    if k < 1:
        raise ValueError("k must be >= 1")
    shape = (k,) if size is None else (size, k)
    if field is FieldTag.R:
        g = rng.standard_normal(shape)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)
    if field is FieldTag.C:
        g = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return g / np.linalg.norm(g, axis=-1, keepdims=True)
    g = rng.standard_normal(shape + (4,))
    nrm = np.sqrt(np.sum(g * g, axis=(-1, -2)))
    return g / nrm[..., None, None]


def _pivot_coefficient(om, field: FieldTag):
    """(1 - lam)/|a|^2 = (1 - conj(x_1))^{-1} from om = 1 - x_1, zero for the degenerate x_1 = 1 case."""
    if field is FieldTag.H:
        coef = qinv(qconj(om))
        deg = np.sqrt(qabs2(om)) < _DEGENERATE_TOL
        return np.where(deg[..., None], 0.0, coef)
    deg = np.abs(om) < _DEGENERATE_TOL
    safe = np.where(deg, 1.0, np.conj(om))
    return np.where(deg, 0.0, 1.0 / safe)


def haar_from_pivots(pivots: Sequence[np.ndarray], field) -> np.ndarray:
    """Batched product of the reflections sending each pivot basis vector to pivots[k].

    ``pivots[k]`` has shape (B, n-k) (plus a trailing 4 over H).  Returns
    (B, n, n[, 4]).
    """
    field = FieldTag.parse(field)
    n = len(pivots)
    B = pivots[0].shape[0]
    M = np.broadcast_to(identity(n, field), (B,) + identity(n, field).shape).copy()
    for k in range(n - 1, -1, -1):
        x = pivots[k]
        a = -x.copy()
        a[:, 0] = _one_minus_first(x, field)
        coef = _pivot_coefficient(a[:, 0], field)
        Y = M[:, k:]
        if field is FieldTag.H:
            ip = qmul(qconj(a)[:, :, None, :], Y).sum(axis=1)  # (B, n, 4)
            s = qmul(coef[:, None, :], ip)
            M[:, k:] = Y - qmul(a[:, :, None, :], s[:, None, :, :])
        else:
            ip = np.einsum("bi,bij->bj", np.conj(a), Y)
            M[:, k:] = Y - a[:, :, None] * (coef[:, None] * ip)[:, None, :]
    return M


@dataclass(frozen=True)
class GroupSpec:
    """kind in {"U", "UH", "SO", "Sn", "wreath"}; ``F`` in {"trivial", "Z2", "T"} for wreath."""

    kind: str
    n: int
    F: str | None = None

    def __post_init__(self):
        if self.kind not in {"U", "UH", "SO", "Sn", "wreath"}:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind == "wreath" and self.F not in {"trivial", "Z2", "T"}:
            raise ValueError("wreath needs F in {'trivial', 'Z2', 'T'}")

    @property
    def field(self) -> FieldTag:
        return {"U": FieldTag.C, "UH": FieldTag.H, "SO": FieldTag.R}.get(self.kind, FieldTag.C)


def _sample_F(F: str, rng: np.random.Generator, size) -> np.ndarray:
    if F == "trivial":
        return np.ones(size, dtype=complex)
    if F == "Z2":
        return rng.choice(np.array([1.0, -1.0]), size=size).astype(complex)
    return np.exp(1j * rng.uniform(-np.pi, np.pi, size=size))


def wreath_steps(n: int, F: str, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-step (target index m_k >= k, unit eps_k) arrays of shape (size, n)."""
    ms = np.stack([rng.integers(k, n, size=size) for k in range(n)], axis=1)
    eps = _sample_F(F, rng, (size, n))
    return ms, eps


def _wreath_pivots(ms: np.ndarray, eps: np.ndarray) -> list[np.ndarray]:
    B, n = ms.shape
    pivots = []
    for k in range(n):
        x = np.zeros((B, n - k), dtype=complex)
        x[np.arange(B), ms[:, k] - k] = eps[:, k]
        pivots.append(x)
    return pivots


def haar_pivots(group: GroupSpec, rng: np.random.Generator, size: int) -> list[np.ndarray]:
    n = group.n
    if group.kind in {"U", "UH"}:
        return [sample_sphere(n - k, group.field, rng, size) for k in range(n)]
    if group.kind == "SO":
        piv = [sample_sphere(n - k, FieldTag.R, rng, size) for k in range(n - 1)]
        # det of each real reflection is -1 unless it is the identity
        sign = np.ones(size)
        for x in piv:
            sign = sign * np.where(np.abs(1 - x[:, 0]) < _DEGENERATE_TOL, 1.0, -1.0)
        piv.append(sign[:, None])
        return piv
    F = "trivial" if group.kind == "Sn" else group.F
    ms, eps = wreath_steps(n, F, rng, size)
    return _wreath_pivots(ms, eps)


def sample_haar(group: GroupSpec, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-distributed element(s) of ``group`` generated by reflections.

    Returns an (n, n) matrix (n x n x 4 over H), or a stack of ``size`` of them.
    S_n and wreath products are returned as complex matrices.
    """
    B = 1 if size is None else size
    piv = haar_pivots(group, rng, B)
    M = haar_from_pivots(piv, group.field)
    return M[0] if size is None else M


def haar_with_gammas(group: GroupSpec, rng: np.random.Generator, size: int):
    """Haar samples together with their reflection coefficients <e_{k+1}, R_k e_{k+1}>."""
    piv = haar_pivots(group, rng, size)
    M = haar_from_pivots(piv, group.field)
    gammas = np.stack([p[:, 0] for p in piv], axis=1)
    return M, gammas


def sample_haar_qr(n: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Independent U(n, C) Haar sampler: QR of a complex Ginibre matrix with phase correction."""
    B = 1 if size is None else size
    Z = (rng.standard_normal((B, n, n)) + 1j * rng.standard_normal((B, n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    Q = Q * (d / np.abs(d))[:, None, :]
    return Q[0] if size is None else Q


# -- serialization ----------------------------------------------------------

def matrix_to_json(M, field) -> list:
    """Array-of-arrays of [re, im] pairs, or [a, b, c, d] over H."""
    field = FieldTag.parse(field)
    M = np.asarray(M)
    if field is FieldTag.H:
        return [[[float(v) for v in M[i, j]] for j in range(M.shape[1])] for i in range(M.shape[0])]
    M = M.astype(complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data, field) -> np.ndarray:
    field = FieldTag.parse(field)
    arr = np.asarray(data, dtype=float)
    if field is FieldTag.H:
        return arr
    z = arr[..., 0] + 1j * arr[..., 1]
    return z.real.copy() if field is FieldTag.R else z
