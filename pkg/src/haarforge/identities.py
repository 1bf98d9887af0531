"""Random sweeps of the classical 2F1 / 1F1 identities.

Each check returns the worst normalized error over its sweep; the sweeps use
parameters kept away from Pochhammer poles.
"""
from __future__ import annotations

import numpy as np

from .specfun import hyp1f1, hyp2f1_terminating, pochhammer

POLE_MARGIN = 0.2


def _param(rng: np.random.Generator, radius: float = 3.0) -> complex:
    while True:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        # stay away from the non-positive integers and their neighbours
        if abs(z.imag) > POLE_MARGIN or min(abs(z.real - k) for k in range(-40, 1)) > POLE_MARGIN:
            return z


def _far_from_poles(x: complex, n: int) -> bool:
    return all(abs(x + j) > POLE_MARGIN for j in range(n + 1))


def _disk(rng: np.random.Generator, radius: float) -> complex:
    r = radius * np.sqrt(rng.random())
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi))


def check_inversion(rng: np.random.Generator, trials: int = 500) -> float:
    """z^n 2F1(-n,b;c;1/z) = (-1)^n (b)_n/(c)_n 2F1(-n,-n-c+1;-n-b+1;z)."""
    worst = 0.0
    done = 0
    while done < trials:
        n = int(rng.integers(0, 11))
        b, c = _param(rng), _param(rng)
        if not (_far_from_poles(c, n) and _far_from_poles(-n - b + 1, n)):
            continue
        z = _disk(rng, 2.0)
        if abs(z) < 0.05:
            continue
        lhs = z ** n * hyp2f1_terminating(n, b, c, 1 / z)
        rhs = (-1) ** n * pochhammer(b, n) / pochhammer(c, n) * hyp2f1_terminating(n, -n - c + 1, -n - b + 1, z)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
        done += 1
    return worst


def check_one_minus_z(rng: np.random.Generator, trials: int = 500) -> float:
    """2F1(-n,b;c;1-z) = (c-b)_n/(c)_n 2F1(-n,b;-n+b+1-c;z)."""
    worst = 0.0
    done = 0
    while done < trials:
        n = int(rng.integers(0, 11))
        b, c = _param(rng), _param(rng)
        if not (_far_from_poles(c, n) and _far_from_poles(-n + b + 1 - c, n)):
            continue
        z = _disk(rng, 2.0)
        lhs = hyp2f1_terminating(n, b, c, 1 - z)
        rhs = pochhammer(c - b, n) / pochhammer(c, n) * hyp2f1_terminating(n, b, -n + b + 1 - c, z)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
        done += 1
    return worst


def check_2f1_derivative(rng: np.random.Generator, trials: int = 200, h: float = 1e-5) -> float:
    """Central difference of 2F1(-n,b;c;z) against (-n b / c) 2F1(-n+1,b+1;c+1;z)."""
    worst = 0.0
    done = 0
    while done < trials:
        n = int(rng.integers(1, 11))
        b, c = _param(rng, 2.0), _param(rng, 2.0)
        if not _far_from_poles(c, n):
            continue
        z = _disk(rng, 1.0)
        fd = (hyp2f1_terminating(n, b, c, z + h) - hyp2f1_terminating(n, b, c, z - h)) / (2 * h)
        exact = (-n * b / c) * hyp2f1_terminating(n - 1, b + 1, c + 1, z)
        worst = max(worst, abs(fd - exact) / (1 + abs(exact)))
        done += 1
    return worst


def confluent_limit_errors(b: complex = 0.7 + 0.2j, c: complex = 1.9 - 0.4j, z: complex = 1.3 + 0.8j,
                           Ns=(10, 100, 1000, 10000)) -> list[float]:
    """|2F1(-N,b;c;-z/N) - 1F1(b;c;z)| for increasing N."""
    target = hyp1f1(b, c, z)
    return [float(abs(hyp2f1_terminating(N, b, c, -z / N) - target)) for N in Ns]


def check_kummer(rng: np.random.Generator, trials: int = 300) -> float:
    """e^z 1F1(a;c;-z) = 1F1(c-a;c;z)."""
    worst = 0.0
    for _ in range(trials):
        a, c = _param(rng), _param(rng)
        z = _disk(rng, 10.0)
        lhs = np.exp(z) * hyp1f1(a, c, -z)
        rhs = hyp1f1(c - a, c, z)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
    return worst


def check_recursion(rng: np.random.Generator, trials: int = 300) -> float:
    """1F1(a;c;z) = 1F1(a-1;c;z) + (z/c) 1F1(a;c+1;z)."""
    worst = 0.0
    for _ in range(trials):
        a, c = _param(rng), _param(rng)
        z = _disk(rng, 10.0)
        lhs = hyp1f1(a, c, z)
        rhs = hyp1f1(a - 1, c, z) + z / c * hyp1f1(a, c + 1, z)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
    return worst


def check_1f1_derivative(rng: np.random.Generator, trials: int = 200, h: float = 1e-5) -> float:
    """Central difference of 1F1(a;c;z) against (a/c) 1F1(a+1;c+1;z)."""
    worst = 0.0
    for _ in range(trials):
        a, c = _param(rng, 2.0), _param(rng, 2.0)
        z = _disk(rng, 5.0)
        fd = (hyp1f1(a, c, z + h) - hyp1f1(a, c, z - h)) / (2 * h)
        exact = a / c * hyp1f1(a + 1, c + 1, z)
        worst = max(worst, abs(fd - exact) / (1 + abs(exact)))
    return worst


def run_identity_suite(rng: np.random.Generator) -> dict:
    """All identities with their tolerances: {name: (value, tolerance, passed)}."""
    out = {}

    def add(name, value, tol):
        out[name] = (float(value), tol, bool(value <= tol))

    add("inversion_2f1", check_inversion(rng), 1e-10)
    add("one_minus_z_2f1", check_one_minus_z(rng), 1e-10)
    add("derivative_2f1", check_2f1_derivative(rng), 1e-6)
    errs = confluent_limit_errors()
    mono = all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    # C/N decay: N * error roughly constant
    scaled = [e * N for e, N in zip(errs, (10, 100, 1000, 10000))]
    out["confluent_limit"] = (errs[-1], "monotone, O(1/N)", bool(mono and max(scaled) < 10 * min(scaled)))
    add("kummer_1f1", check_kummer(rng), 1e-12)
    add("recursion_1f1", check_recursion(rng), 1e-12)
    add("derivative_1f1", check_1f1_derivative(rng), 1e-6)
    return out
