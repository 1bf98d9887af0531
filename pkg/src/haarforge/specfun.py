"""Complex special functions: log-gamma, gamma ratios, terminating 2F1 and 1F1.

Everything here accepts scalars or numpy arrays for the argument ``z`` and
returns complex values.  Parameters (``b``, ``c``) are complex scalars.
Poles are reported as :class:`~haarforge.errors.PoleError`, never as NaN.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, PoleError

_LANCZOS_G = 7.0
_LANCZOS_COEF = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _is_nonpositive_integer(z, tol=1e-13):
    z = np.asarray(z, dtype=complex)
    r = np.round(z.real)
    return (np.abs(z.imag) <= tol) & (np.abs(z.real - r) <= tol * np.maximum(1.0, np.abs(r))) & (r <= 0)


def pochhammer(x, k: int):
    """Rising factorial (x)_k = x (x+1) ... (x+k-1), with (x)_0 = 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = np.ones_like(np.asarray(x, dtype=complex))
    for j in range(k):
        out = out * (x + j)
    return out[()] if out.ndim == 0 else out


def _lanczos_log_gamma(z):
    z = z - 1.0
    x = np.full_like(z, _LANCZOS_COEF[0])
    for i in range(1, len(_LANCZOS_COEF)):
        x = x + _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def log_gamma(z):
    """Principal-branch complex log Gamma(z) via a g=7 Lanczos sum.

    For Re z < 0.5 the argument is shifted up with log Gamma(z) =
    log Gamma(z + m) - sum_k log(z + k); the sum of principal logarithms
    keeps the branch cut on the negative real axis.  Raises PoleError at
    non-positive integers.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError(f"log_gamma pole at {z[_is_nonpositive_integer(z)].ravel()[0]}")
    out = np.empty_like(z)
    right = z.real >= 0.5
    out[right] = _lanczos_log_gamma(z[right])
    zl = z[~right]
    if zl.size:
        m = np.ceil(0.5 - zl.real).astype(int)
        acc = np.zeros_like(zl)
        for k in range(int(m.max())):
            live = k < m
            acc[live] += np.log(zl[live] + k)
        out[~right] = _lanczos_log_gamma(zl + m) - acc
    return out[()] if out.ndim == 0 else out


def rgamma(z):
    """1/Gamma(z); exactly zero at the poles of Gamma."""
    z = np.asarray(z, dtype=complex)
    pole = _is_nonpositive_integer(z)
    out = np.zeros_like(z)
    if np.any(~pole):
        out[~pole] = np.exp(-log_gamma(z[~pole]))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class GammaRatioSpec:
    """Symbolic ratio prod Gamma(numerators) / prod Gamma(denominators)."""

    numerators: Sequence[complex] = field(default_factory=tuple)
    denominators: Sequence[complex] = field(default_factory=tuple)


def gamma_ratio(spec: GammaRatioSpec | Sequence[complex], denominators=None, *,
                allow_denominator_poles: bool = False) -> complex:
    """Evaluate Gamma[num.. / den..] in log space.

    Either pass a :class:`GammaRatioSpec` or the two argument lists.  A pole in a
    numerator always raises; a pole in a denominator raises unless
    ``allow_denominator_poles`` is set, in which case the ratio is 0.
    """
    if isinstance(spec, GammaRatioSpec):
        num, den = list(spec.numerators), list(spec.denominators)
    else:
        num, den = list(spec), list(denominators or ())
    for x in num:
        if _is_nonpositive_integer(x):
            raise PoleError(f"numerator Gamma pole at {x}")
    for x in den:
        if _is_nonpositive_integer(x):
            if allow_denominator_poles:
                return 0j
            raise PoleError(f"denominator Gamma pole at {x}")
    s = sum((complex(log_gamma(x)) for x in num), 0j) - sum((complex(log_gamma(x)) for x in den), 0j)
    return complex(np.exp(s))


def _kahan_add(s, comp, term):
    # Neumaier variant; works elementwise on complex arrays
    t = s + term
    big = np.abs(s) >= np.abs(term)
    comp = comp + np.where(big, (s - t) + term, (term - t) + s)
    return t, comp


def _hyp2f1_sum(n: int, b: complex, c: complex, z):
    term = np.ones_like(z)
    s = np.ones_like(z)
    comp = np.zeros_like(z)
    tmax = np.ones(z.shape)
    for k in range(1, n + 1):
        term = term * ((k - 1 - n) * (b + k - 1) / ((c + k - 1) * k)) * z
        s, comp = _kahan_add(s, comp, term)
        tmax = np.maximum(tmax, np.abs(term))
    return s + comp, tmax


def hyp2f1_terminating(n: int, b: complex, c: complex, z):
    """The polynomial 2F1(-n, b; c; z) = sum_k (-1)^k C(n,k) (b)_k/(c)_k z^k.

    Summed forward with compensated accumulation.  Where the cancellation
    ratio (largest term over result) exceeds 1e8 the value is recomputed from
    the 1 - z transformed form when that form is pole free and better
    conditioned.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    b = complex(b)
    c = complex(c)
    for j in range(n):
        if abs(c + j) < 1e-14:
            raise PoleError(f"(c)_k vanishes: c={c}, k={j + 1}")
    z_arr = np.asarray(z, dtype=complex)
    zz = np.atleast_1d(z_arr)
    s, tmax = _hyp2f1_sum(n, b, c, zz)
    if n > 0:
        bad = tmax > 1e8 * np.maximum(np.abs(s), 1e-300)
        c2 = -n + b + 1 - c
        if np.any(bad) and all(abs(c2 + j) > 1e-12 for j in range(n)):
            pref = complex(np.prod([(c - b + j) / (c + j) for j in range(n)]))
            s2, tmax2 = _hyp2f1_sum(n, b, c2, 1.0 - zz[bad])
            s2 = pref * s2
            better = tmax2 * abs(pref) / np.maximum(np.abs(s2), 1e-300) < tmax[bad] / np.maximum(np.abs(s[bad]), 1e-300)
            idx = np.flatnonzero(bad)[better]
            s[idx] = s2[better]
    return s.reshape(z_arr.shape)[()] if z_arr.ndim == 0 else s.reshape(z_arr.shape)


_HYP1F1_MAXTERMS = 5000
# re-evaluate in extended precision once more than ~2 digits cancel
_LOSSY = 1e2


def _hyp1f1_series(b: complex, c: complex, z):
    s = np.ones_like(z)
    comp = np.zeros_like(z)
    term = np.ones_like(z)
    tmax = np.ones(z.shape)
    small_run = np.zeros(z.shape, dtype=int)
    active = np.ones(z.shape, dtype=bool)
    k = 0
    while np.any(active):
        k += 1
        if k > _HYP1F1_MAXTERMS:
            raise ConvergenceError("1F1 series did not converge")
        term = np.where(active, term * ((b + k - 1) / ((c + k - 1) * k)) * z, 0)
        s, comp = _kahan_add(s, comp, term)
        tmax = np.maximum(tmax, np.abs(term))
        tiny = np.abs(term) < 1e-17 * np.abs(s + comp)
        small_run = np.where(tiny, small_run + 1, 0)
        # the series only settles once k has passed |z|
        active = active & ~((small_run >= 3) & (k > np.abs(z)))
    return s + comp, tmax


def hyp1f1(b: complex, c: complex, z):
    """Confluent hypergeometric 1F1(b; c; z) for |z| <= 200.

    Kummer's transformation is applied when Re z < 0.  Points where the power
    series loses more than ~2 digits to cancellation (large imaginary z) are
    re-evaluated with mpmath at extended precision.
    """
    b = complex(b)
    c = complex(c)
    if _is_nonpositive_integer(c):
        raise PoleError(f"1F1 parameter pole c={c}")
    z_arr = np.asarray(z, dtype=complex)
    zz = np.atleast_1d(z_arr).astype(complex)
    if np.any(np.abs(zz) > 200):
        raise ConvergenceError("1F1 supported only for |z| <= 200")
    neg = zz.real < 0
    out = np.empty_like(zz)
    lossy = np.zeros(zz.shape, dtype=bool)
    if np.any(~neg):
        s, tmax = _hyp1f1_series(b, c, zz[~neg])
        out[~neg] = s
        lossy[~neg] = tmax > _LOSSY * np.abs(s)
    if np.any(neg):
        zn = zz[neg]
        s, tmax = _hyp1f1_series(c - b, c, -zn)
        out[neg] = np.exp(zn) * s
        lossy[neg] = tmax > _LOSSY * np.abs(s)
    if np.any(lossy):
        import mpmath

        with mpmath.workdps(40 + int(np.max(np.abs(zz[lossy]))) // 2):
            for i in np.flatnonzero(lossy):
                out[i] = complex(mpmath.hyp1f1(b, c, complex(zz[i])))
    return out.reshape(z_arr.shape)[()] if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def hyp1f1_deriv(b: complex, c: complex, z):
    """d/dz 1F1(b; c; z) = (b/c) 1F1(b+1; c+1; z)."""
    return (complex(b) / complex(c)) * hyp1f1(complex(b) + 1, complex(c) + 1, z)
