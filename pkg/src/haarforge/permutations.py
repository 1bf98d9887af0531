"""Permutations, wreath products F wr S_n and the Chinese restaurant process.

Indices are 0-based.  A permutation acts on basis vectors by
``sigma . e_j = e_{sigma(j)}``, and (f; sigma) is represented by the matrix
with entry f(i) at (i, j) whenever i = sigma(j).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j]

    def compose(self, other: "Permutation") -> "Permutation":
        """self o other."""
        return Permutation(tuple(self.images[j] for j in other.images))

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, i in enumerate(self.images):
            inv[i] = j
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def matrix(self) -> np.ndarray:
        M = np.zeros((self.n, self.n))
        M[list(self.images), list(range(self.n))] = 1.0
        return M


def cycle_count(sigma: Permutation) -> int:
    return len(sigma.cycles())


def transposition(n: int, i: int, j: int) -> Permutation:
    img = list(range(n))
    img[i], img[j] = img[j], img[i]
    return Permutation(tuple(img))


def crp_step_probs(k: int, theta: float) -> np.ndarray:
    """Law of m_k on {0..k} for the (0-based) step k: k itself has weight theta, others 1."""
    p = np.ones(k + 1)
    p[k] = theta
    return p / (theta + k)


def permutation_from_crp_path(ms) -> Permutation:
    """sigma = tau_n o ... o tau_2 with tau_k = (k, m_k); ``ms[k-1]`` is m_k for k = 1..n-1."""
    n = len(ms) + 1
    img = list(range(n))
    for k, m in enumerate(ms, start=1):
        if m != k:
            # left composition by a transposition swaps the image values k and m
            img = [m if v == k else k if v == m else v for v in img]
    return Permutation(tuple(img))


def crp_permutation(n: int, theta: float, rng: np.random.Generator, *, return_path: bool = False):
    """Chinese-restaurant draw of a permutation with Ewens(theta) law.

    With ``return_path`` the list of step choices m_1..m_{n-1} is returned too.
    """
    if theta <= 0:
        raise ValueError("theta must be positive")
    ms = [int(rng.choice(k + 1, p=crp_step_probs(k, theta))) for k in range(1, n)]
    sigma = permutation_from_crp_path(ms)
    return (sigma, ms) if return_path else sigma


def ewens_density(sigma: Permutation, theta: float) -> float:
    """theta^{k_sigma} / (theta)_n."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    rising = math.prod(theta + j for j in range(sigma.n))
    return theta ** cycle_count(sigma) / rising


@dataclass(frozen=True)
class WreathElement:
    """(f; sigma) in F wr S_n; ``f`` holds n unit complex numbers."""

    f: tuple[complex, ...]
    sigma: Permutation

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(complex(x) for x in self.f))
        if len(self.f) != self.sigma.n:
            raise ValueError("f and sigma sizes differ")

    @classmethod
    def identity(cls, n: int) -> "WreathElement":
        return cls((1.0,) * n, Permutation.identity(n))

    @property
    def n(self) -> int:
        return self.sigma.n

    def compose(self, other: "WreathElement") -> "WreathElement":
        """(f; s)(h; s') = (f * h o s^{-1}; s s')."""
        inv = self.sigma.inverse()
        f = tuple(self.f[i] * other.f[inv(i)] for i in range(self.n))
        return WreathElement(f, self.sigma.compose(other.sigma))

    __mul__ = compose

    def cycle_weight(self, cycle) -> complex:
        return complex(np.prod([self.f[i] for i in cycle]))


def wreath_matrix(w: WreathElement) -> np.ndarray:
    n = w.n
    M = np.zeros((n, n), dtype=complex)
    for j in range(n):
        i = w.sigma(j)
        M[i, j] = w.f[i]
    return M


def signed_transposition(n: int, k: int, m: int, eps: complex) -> WreathElement:
    """Wreath form of the reflection sending e_k to eps e_m (m >= k)."""
    f = [1.0 + 0j] * n
    if m == k:
        f[k] = eps
        return WreathElement(tuple(f), Permutation.identity(n))
    f[m] = eps
    f[k] = np.conj(eps)
    return WreathElement(tuple(f), transposition(n, k, m))


def wreath_from_steps(ms, eps) -> WreathElement:
    """R_0 R_1 ... R_{n-1} where R_k sends e_k to eps_k e_{m_k}."""
    n = len(ms)
    g = WreathElement.identity(n)
    for k in range(n):
        g = g.compose(signed_transposition(n, k, int(ms[k]), complex(eps[k])))
    return g


def sample_wreath(n: int, F: str, rng: np.random.Generator) -> WreathElement:
    from .groups import wreath_steps

    ms, eps = wreath_steps(n, F, rng, 1)
    return wreath_from_steps(ms[0], eps[0])
