"""Real quaternions x = a + ib + jc + kd.

Scalars are :class:`Quaternion`; vectors and matrices over H are float arrays
with a trailing axis of length 4 holding (a, b, c, d).  The ``q*`` helpers
broadcast over leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def qmul(p, q):
    """Hamilton product of quaternion arrays (..., 4)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=-1)


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs2(q):
    q = np.asarray(q, dtype=float)
    return np.sum(q * q, axis=-1)


def qinv(q):
    return qconj(q) / qabs2(q)[..., None]


def qreal(x):
    """Embed real scalars/arrays as quaternions."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (4,))
    out[..., 0] = x
    return out


def qmatmul(A, B):
    """Matrix product over H: (..., n, m, 4) @ (..., m, p, 4)."""
    prod = qmul(A[..., :, :, None, :], B[..., None, :, :, :])
    return prod.sum(axis=-3)


def qeye(n: int):
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def qadjoint(A):
    return qconj(np.swapaxes(A, -2, -3))


def phi(q):
    """2x2 complex representation [[a+ib, c+id], [-c+id, a-ib]] of (..., 4) arrays."""
    q = np.asarray(q, dtype=float)
    z1 = q[..., 0] + 1j * q[..., 1]
    z2 = q[..., 2] + 1j * q[..., 3]
    out = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = z1
    out[..., 0, 1] = z2
    out[..., 1, 0] = -np.conj(z2)
    out[..., 1, 1] = np.conj(z1)
    return out


def embed_quaternion(M):
    """Blockwise phi: an (..., n, n, 4) quaternion matrix becomes (..., 2n, 2n) complex."""
    M = np.asarray(M, dtype=float)
    blocks = phi(M)  # (..., n, n, 2, 2)
    n = M.shape[-2]
    lead = M.shape[:-3]
    out = np.swapaxes(blocks, -3, -2)  # (..., n, 2, n, 2)
    return out.reshape(lead + (2 * n, 2 * n))


def z_tilde(n: int):
    """J1 (+) ... (+) J1 with J1 = [[0, 1], [-1, 0]]."""
    out = np.zeros((2 * n, 2 * n))
    for k in range(n):
        out[2 * k, 2 * k + 1] = 1.0
        out[2 * k + 1, 2 * k] = -1.0
    return out


@dataclass(frozen=True)
class Quaternion:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @classmethod
    def from_array(cls, q) -> "Quaternion":
        a, b, c, d = (float(v) for v in np.asarray(q, dtype=float))
        return cls(a, b, c, d)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    @staticmethod
    def _coerce(other):
        if isinstance(other, Quaternion):
            return other.to_array()
        if isinstance(other, (int, float, np.floating, np.integer)):
            return qreal(float(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion.from_array(self.to_array() + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion.from_array(self.to_array() - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion.from_array(o - self.to_array())

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion.from_array(qmul(self.to_array(), o))

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion.from_array(qmul(o, self.to_array()))

    def __truediv__(self, other):
        # right division x / y = x y^{-1}
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Quaternion.from_array(qmul(self.to_array(), qinv(o)))

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> float:
        return self.a ** 2 + self.b ** 2 + self.c ** 2 + self.d ** 2

    def __abs__(self) -> float:
        return float(np.sqrt(self.norm2()))

    def inverse(self) -> "Quaternion":
        return Quaternion.from_array(qinv(self.to_array()))

    def matrix(self) -> np.ndarray:
        return phi(self.to_array())
