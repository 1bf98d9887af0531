"""Circular Jacobi weight, its orthogonal polynomials and correlation kernels.

Weight on the circle (delta = a + ib, a > -1/2)::

    w1(theta) = (2 - 2 cos theta)^a exp(-b (pi sgn(theta) - theta))

Monic orthogonal polynomials Phi_n, their reciprocals Phi_n^*, norms and
the finite-n reproducing kernel are evaluated from closed hypergeometric forms.
The scaling limit at theta = 0 is the confluent hypergeometric kernel, which
reduces to the sine kernel at delta = 0 and to a Bessel kernel for real delta.

Real-valued kernels (``kernel_tilde``, the limit kernels) are gauge fixed:
the finite kernel is multiplied by exp(-i (n-1)(tau-theta)/2), which leaves every
correlation determinant unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import jv

from .delta import DeltaParameter
from .errors import DomainError, SingularityError
from .specfun import gamma_ratio, hyp1f1, hyp2f1_terminating

_DIAG_TOL = 1e-8
_REAL_TOL = 1e-12


def _delta(delta) -> DeltaParameter:
    return DeltaParameter.coerce(delta)


def _sgn(x):
    return np.sign(x)


# -- weights ----------------------------------------------------------------

def weight_w1(theta, delta):
    """(2 - 2cos theta)^a e^{-b(pi sgn theta - theta)}, with sgn 0 = 0."""
    d = _delta(delta)
    th = np.asarray(theta, dtype=float)
    if np.any(np.abs(th) > np.pi + 1e-12):
        raise DomainError("theta must lie in [-pi, pi]")
    if d.a < 0 and np.any(th == 0):
        raise SingularityError("w1 is singular at theta = 0 for a < 0")
    base = 4.0 * np.sin(0.5 * th) ** 2
    return base ** d.a * np.exp(-d.b * (np.pi * _sgn(th) - th))


def weight_w2(theta, delta):
    """(1 + e^{i theta})^{conj d} (1 + e^{-i theta})^d = (2 + 2cos theta)^a e^{b theta}.

    The sign of b is the principal-branch value of the product.  With it,
    w1(theta) = w2(-tau) for tau = -theta + pi sgn(theta), w1(z) = w2(-z), and
    the Cayley image of w2 is the pseudo-Jacobi weight up to 2^{2a}.
    Singular at the edges +-pi.
    """
    d = _delta(delta)
    th = np.asarray(theta, dtype=float)
    base = 4.0 * np.cos(0.5 * th) ** 2
    if d.a < 0 and np.any(base == 0):
        raise SingularityError("w2 is singular at theta = +-pi for a < 0")
    return base ** d.a * np.exp(d.b * th)


def theta_to_tau(theta):
    """theta -> -theta + pi sgn(theta), carrying the w1 singularity to the edges."""
    th = np.asarray(theta, dtype=float)
    return -th + np.pi * _sgn(th)


@lru_cache(maxsize=256)
def _normalization_c(a: float, b: float) -> float:
    d = complex(a, b)
    return gamma_ratio([1 + d, 1 + d.conjugate()], [1 + 2 * a]).real / (2 * np.pi)


def normalization_c(delta) -> float:
    """c(delta) making c(delta) w1 a probability density on (-pi, pi)."""
    d = _delta(delta)
    return _normalization_c(d.a, d.b)


def fourier_coeff_w1(m: int, delta) -> complex:
    """(1/2pi) int w1 e^{-i m theta} dtheta = (-1)^m Gamma[1+s / conj(delta)-m+1, delta+m+1]."""
    d = _delta(delta)
    return (-1) ** m * gamma_ratio([1 + d.s], [d.conj - m + 1, d.value + m + 1],
                                   allow_denominator_poles=True)


# -- orthogonal polynomials -------------------------------------------------

def phi_norm_sq(n: int, delta) -> float:
    """||Phi_n||^2 in L^2(c(delta) w1 dtheta)."""
    d = _delta(delta)
    return gamma_ratio([d.s + n + 1, n + 1, d.conj + 1, d.value + 1],
                       [d.conj + n + 1, d.value + n + 1, d.s + 1]).real


def _use_one_minus_z(n: int, z):
    r = np.abs(1.0 - z)
    return (r < 0.5) & (max(n, 1) * r < 2.0)


def _phi_z_form(n: int, d: DeltaParameter, z):
    # Gamma[delta+n, conj+1 / conj+n+1, delta] 2F1(-n, conj+1; 1-n-delta; z),
    # regrouped termwise so that delta = 0 (where the 2F1 has a 0/0) is regular:
    # coefficient of z^k is C(n,k) (delta)_{n-k} (conj+1)_k / (conj+1)_n.
    coef = np.empty(n + 1, dtype=complex)
    coef[n] = 1.0
    for k in range(n, 0, -1):
        coef[k - 1] = coef[k] * (k / (n - k + 1)) * (d.value + n - k) / (d.conj + k)
    out = np.zeros_like(z)
    for k in range(n, -1, -1):
        out = out * z + coef[k]
    return out


def monic_phi(n: int, delta, z):
    """Monic orthogonal polynomial Phi_n(z) for the weight w1."""
    d = _delta(delta)
    z_arr = np.asarray(z, dtype=complex)
    zz = np.atleast_1d(z_arr)
    out = np.empty_like(zz)
    near = _use_one_minus_z(n, zz)
    if np.any(~near):
        out[~near] = _phi_z_form(n, d, zz[~near])
    if np.any(near):
        pref = gamma_ratio([d.s + 1 + n, d.conj + 1], [d.conj + n + 1, d.s + 1])
        out[near] = pref * hyp2f1_terminating(n, d.conj + 1, d.s + 1, 1.0 - zz[near])
    return out.reshape(z_arr.shape)[()] if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def monic_phi_star(n: int, delta, z):
    """Reciprocal polynomial Phi_n^*(z) = 2F1(-n, conj(delta); -n-delta; z)."""
    d = _delta(delta)
    z_arr = np.asarray(z, dtype=complex)
    zz = np.atleast_1d(z_arr)
    out = np.empty_like(zz)
    near = _use_one_minus_z(n, zz)
    if np.any(~near):
        out[~near] = hyp2f1_terminating(n, d.conj, -n - d.value, zz[~near])
    if np.any(near):
        pref = gamma_ratio([d.s + 1 + n, d.value + 1], [d.value + n + 1, d.s + 1])
        out[near] = pref * hyp2f1_terminating(n, d.conj, d.s + 1, 1.0 - zz[near])
    return out.reshape(z_arr.shape)[()] if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def phi_star_deriv(n: int, delta, z):
    """(Phi_n^*)'(z)."""
    d = _delta(delta)
    z_arr = np.asarray(z, dtype=complex)
    if n == 0:
        return np.zeros_like(z_arr)[()] if z_arr.ndim == 0 else np.zeros_like(z_arr)
    zz = np.atleast_1d(z_arr)
    out = np.empty_like(zz)
    near = _use_one_minus_z(n, zz)
    if np.any(~near):
        c = -n - d.value
        out[~near] = (-n * d.conj / c) * hyp2f1_terminating(n - 1, d.conj + 1, c + 1, zz[~near])
    if np.any(near):
        pref = gamma_ratio([d.s + 1 + n, d.value + 1], [d.value + n + 1, d.s + 1])
        pref *= n * d.conj / (d.s + 1)
        out[near] = pref * hyp2f1_terminating(n - 1, d.conj + 1, d.s + 2, 1.0 - zz[near])
    return out.reshape(z_arr.shape)[()] if z_arr.ndim == 0 else out.reshape(z_arr.shape)


@dataclass(frozen=True)
class OpucSystem:
    """Evaluators for the w1 orthogonal polynomials up to ``max_degree``."""

    delta: DeltaParameter
    max_degree: int
    norms: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", _delta(self.delta))
        object.__setattr__(self, "norms", tuple(phi_norm_sq(k, self.delta) for k in range(self.max_degree + 1)))

    def _check(self, n: int):
        if not 0 <= n <= self.max_degree:
            raise ValueError(f"degree {n} outside 0..{self.max_degree}")

    def phi(self, n: int, z):
        self._check(n)
        return monic_phi(n, self.delta, z)

    def phi_star(self, n: int, z):
        self._check(n)
        return monic_phi_star(n, self.delta, z)

    def phi_star_deriv(self, n: int, z):
        self._check(n)
        return phi_star_deriv(n, self.delta, z)

    def norm_sq(self, n: int) -> float:
        self._check(n)
        return self.norms[n]

    def orthonormal(self, n: int, z):
        return self.phi(n, z) / np.sqrt(self.norm_sq(n))

    def kernel(self, n: int, theta, tau, form: str = "cd"):
        return kernel_finite(n, self.delta, theta, tau, form=form)


# -- finite kernels ---------------------------------------------------------

def kernel_finite(n: int, delta, theta, tau, form: str = "cd"):
    """K_n(e^{i theta}, e^{i tau}) = sum_{l<n} conj(phi_l(z)) phi_l(zeta), orthonormal phi_l.

    ``form="sum"`` evaluates the sum; ``form="cd"`` the Christoffel-Darboux
    quotient, switching to the l'Hospital diagonal when the circle distance
    of theta and tau is below 1e-8 (1 + |theta|).
    """
    d = _delta(delta)
    th, ta = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(tau, dtype=float))
    z = np.exp(1j * th)
    zeta = np.exp(1j * ta)
    if form == "sum":
        out = np.zeros(th.shape, dtype=complex)
        for ell in range(n):
            out = out + np.conj(monic_phi(ell, d, z)) * monic_phi(ell, d, zeta) / phi_norm_sq(ell, d)
        return out[()] if out.ndim == 0 else out
    if form != "cd":
        raise ValueError("form must be 'sum' or 'cd'")
    nrm = phi_norm_sq(n, d)
    # distance on the circle, so that theta = pi and tau = -pi count as diagonal
    gap = np.abs(np.angle(np.exp(1j * (th - ta))))
    diag = gap < _DIAG_TOL * (1 + np.abs(th))
    out = np.empty(th.shape, dtype=complex)
    off = ~diag
    if np.any(off):
        zo, wo = z[off], zeta[off]
        num = np.conj(monic_phi_star(n, d, zo)) * monic_phi_star(n, d, wo) \
            - np.conj(monic_phi(n, d, zo)) * monic_phi(n, d, wo)
        out[off] = num / (nrm * (1 - np.conj(zo) * wo))
    if np.any(diag):
        zd = z[diag]
        ps = monic_phi_star(n, d, zd)
        dps = phi_star_deriv(n, d, zd)
        out[diag] = (n * np.abs(ps) ** 2 - 2 * np.real(np.conj(ps) * zd * dps)) / nrm
    return out[()] if out.ndim == 0 else out


def _as_real(values, what: str):
    values = np.asarray(values)
    bad = np.abs(values.imag) > _REAL_TOL * (1 + np.abs(values.real)) * 1e3
    if np.any(bad):
        raise ArithmeticError(f"{what}: imaginary part {np.max(np.abs(values.imag))} is not roundoff")
    return values.real


def kernel_tilde(n: int, delta, theta, tau, form: str = "cd"):
    """Weighted, gauge-fixed kernel c(delta) sqrt(w1 w1) K_n, real valued."""
    d = _delta(delta)
    th, ta = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(tau, dtype=float))
    K = kernel_finite(n, d, th, ta, form=form)
    w = np.sqrt(weight_w1(th, d) * weight_w1(ta, d))
    gauge = np.exp(-0.5j * (n - 1) * (ta - th))
    out = _as_real(normalization_c(d) * w * gauge * K, "kernel_tilde")
    return out[()] if np.ndim(out) == 0 else out


def one_point_density(n: int, delta, theta):
    """Eigenangle intensity K~_n(theta, theta); integrates to n over (-pi, pi)."""
    return kernel_tilde(n, delta, theta, theta)


# -- limit kernels ----------------------------------------------------------

def _limit_const(d: DeltaParameter) -> float:
    return gamma_ratio([1 + d.value, 1 + d.conj], [1 + d.s, 1 + d.s]).real


def p_circle(theta, delta):
    """|theta|^a e^{-pi b sgn(theta)/2} e^{i theta/2} 1F1(delta; 2a+1; -i theta)."""
    d = _delta(delta)
    th = np.asarray(theta, dtype=float)
    amp = np.abs(th) ** d.a * np.exp(-0.5 * np.pi * d.b * _sgn(th))
    return amp * np.exp(0.5j * th) * hyp1f1(d.value, d.s + 1, -1j * th)


def p_circle_unit_phase(theta, delta):
    """P^T with the unit-modulus factor exp(-(pi/4)(delta - conj delta) sgn theta).

    For b != 0 this replaces the real factor exp(-pi b sgn(theta)/2) of
    ``p_circle`` by a pure phase; the resulting kernel is not the n -> oo limit.
    """
    d = _delta(delta)
    th = np.asarray(theta, dtype=float)
    ph = np.exp(0.5j * th - 0.25 * np.pi * (d.value - d.conj) * _sgn(th))
    return np.abs(th) ** d.a * ph * hyp1f1(d.value, d.s + 1, -1j * th)


def _limit_diag(theta, d: DeltaParameter):
    th = np.asarray(theta, dtype=float)
    g = hyp1f1(d.value, d.s + 1, -1j * th)
    h = hyp1f1(d.conj + 1, d.s + 2, 1j * th)
    r2 = np.abs(th) ** d.s * np.exp(-np.pi * d.b * _sgn(th))
    val = np.real(g * (np.conj(g) - 2 * d.conj / (d.s + 1) * h))
    return _limit_const(d) * r2 * val / (2 * np.pi)


def limit_kernel_circle_diagonal_alt(theta, delta):
    """|theta|^{2a}/(2pi) C Re[1F1(d; s+1; -i theta) (1F1(conj d; s+1; i theta) - 2 1F1(conj d + 1; s+2; i theta))].

    Differs from the diagonal of ``limit_kernel_circle`` (missing the
    conj(d)/(s+1) weight and the b-dependent factor); kept for comparison.
    """
    d = _delta(delta)
    th = np.asarray(theta, dtype=float)
    g = hyp1f1(d.value, d.s + 1, -1j * th)
    val = np.real(g * (hyp1f1(d.conj, d.s + 1, 1j * th) - 2 * hyp1f1(d.conj + 1, d.s + 2, 1j * th)))
    return np.abs(th) ** d.s / (2 * np.pi) * _limit_const(d) * val


def limit_kernel_circle(theta, tau, delta, *, unit_phase: bool = False):
    """Confluent hypergeometric limit of n^{-1} K~_n(e^{i theta/n}, e^{i tau/n})."""
    d = _delta(delta)
    th, ta = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(tau, dtype=float))
    if np.any(th == 0) or np.any(ta == 0):
        raise SingularityError("limit kernel is singular at 0")
    P = p_circle_unit_phase if unit_phase else p_circle
    diag = np.abs(th - ta) < _DIAG_TOL * (1 + np.abs(th))
    out = np.empty(th.shape)
    off = ~diag
    if np.any(off):
        pt = P(th[off], d)
        pu = P(ta[off], d)
        out[off] = _limit_const(d) * np.imag(pt * np.conj(pu)) / (np.pi * (th[off] - ta[off]))
    if np.any(diag):
        out[diag] = _limit_diag(th[diag], d)
    return out[()] if out.ndim == 0 else out


def sine_kernel(theta, tau):
    th, ta = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(tau, dtype=float))
    x = th - ta
    out = np.where(x == 0, 1 / (2 * np.pi), np.sin(0.5 * x) / (np.pi * np.where(x == 0, 1, x)))
    return out[()] if out.ndim == 0 else out


def bessel_kernel(theta, tau, delta):
    """Real-delta limit kernel through Bessel functions, off the diagonal.

    sqrt|theta tau| [sgn(theta) J_{d+1/2}(|theta|/2) J_{d-1/2}(|tau|/2)
                     - sgn(tau) J_{d-1/2}(|theta|/2) J_{d+1/2}(|tau|/2)] / (4 (theta - tau))
    """
    d = _delta(delta)
    if d.b != 0:
        raise DomainError("Bessel form needs real delta")
    th, ta = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(tau, dtype=float))
    if np.any(th == 0) or np.any(ta == 0):
        raise SingularityError("Bessel kernel is singular at 0")
    if np.any(th == ta):
        raise DomainError("Bessel form is evaluated off the diagonal only")
    x, y = np.abs(th) / 2, np.abs(ta) / 2
    nu = d.a
    num = _sgn(th) * jv(nu + 0.5, x) * jv(nu - 0.5, y) - _sgn(ta) * jv(nu - 0.5, x) * jv(nu + 0.5, y)
    out = np.sqrt(np.abs(th * ta)) * num / (4 * (th - ta))
    return out[()] if out.ndim == 0 else out


def bessel_kernel_pi_scaled(theta, tau, delta):
    """Bessel expression with arguments pi*theta/2 instead of |theta|/2; does not match the limit."""
    d = _delta(delta)
    th, ta = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(tau, dtype=float))
    x, y = np.pi * th / 2, np.pi * ta / 2
    nu = d.a
    num = jv(nu + 0.5, x) * jv(nu - 0.5, y) - jv(nu - 0.5, x) * jv(nu + 0.5, y)
    return 0.5 * np.pi * np.sqrt(th * ta) * num / (2 * (th - ta))


# real-line (Cayley image) limit kernel

def _line_amp(x, d: DeltaParameter):
    return np.abs(2 / x) ** d.a * np.exp(-1j / x) * np.exp(0.5 * np.pi * d.b * _sgn(x))


def p_line(x, delta):
    """P~(x) = P^T(-2/x)."""
    d = _delta(delta)
    x = np.asarray(x, dtype=float)
    return _line_amp(x, d) * hyp1f1(d.value, d.s + 1, 2j / x)


def q_line(x, delta):
    d = _delta(delta)
    x = np.asarray(x, dtype=float)
    return (2 / x) * _line_amp(x, d) * hyp1f1(d.value + 1, d.s + 2, 2j / x)


def _line_const(d: DeltaParameter) -> float:
    return gamma_ratio([d.value + 1, d.conj + 1], [d.s + 1, d.s + 2]).real / (2 * np.pi)


def _line_derivs(x, d: DeltaParameter):
    A = _line_amp(x, d)
    dA = A * (-d.a / x + 1j / x ** 2)
    z = 2j / x
    dz = -2j / x ** 2
    F = hyp1f1(d.value, d.s + 1, z)
    dF = d.value / (d.s + 1) * hyp1f1(d.value + 1, d.s + 2, z) * dz
    G = hyp1f1(d.value + 1, d.s + 2, z)
    dG = (d.value + 1) / (d.s + 2) * hyp1f1(d.value + 2, d.s + 3, z) * dz
    P = A * F
    dP = dA * F + A * dF
    Q = (2 / x) * A * G
    dQ = (-2 / x ** 2) * A * G + (2 / x) * (dA * G + A * dG)
    return P, dP, Q, dQ


def limit_kernel_line(x, y, delta):
    """Borodin-Olshanski confluent hypergeometric kernel on the real line."""
    d = _delta(delta)
    xx, yy = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(xx == 0) or np.any(yy == 0):
        raise SingularityError("line kernel is singular at 0")
    diag = np.abs(xx - yy) < _DIAG_TOL * (1 + np.abs(xx))
    out = np.empty(xx.shape, dtype=complex)
    off = ~diag
    if np.any(off):
        xo, yo = xx[off], yy[off]
        num = p_line(xo, d) * q_line(yo, d) - q_line(xo, d) * p_line(yo, d)
        out[off] = num / (xo - yo)
    if np.any(diag):
        P, dP, Q, dQ = _line_derivs(xx[diag], d)
        out[diag] = Q * dP - P * dQ
    out = _as_real(_line_const(d) * out, "limit_kernel_line")
    return out[()] if out.ndim == 0 else out


# -- convergence and correlations --------------------------------------------

def scaled_kernel(n: int, delta, theta, tau):
    """n^{-1} K~_n(theta/n, tau/n)."""
    th = np.asarray(theta, dtype=float)
    ta = np.asarray(tau, dtype=float)
    return kernel_tilde(n, delta, th / n, ta / n) / n


def convergence_sweep(delta, grid, n_list, *, min_gap: float = 0.1):
    """Sup-norm distance between n^{-1}K~_n(theta/n, tau/n) and the limit kernel.

    ``grid`` holds the theta values; all ordered pairs with |theta - tau| >=
    ``min_gap`` are used.  Returns a list of rows {"n", "sup_error", "argmax"}.
    """
    g = np.asarray(grid, dtype=float)
    g = g[g != 0]  # the limit kernel is singular at 0
    T, U = np.meshgrid(g, g, indexing="ij")
    mask = np.abs(T - U) >= min_gap
    th, ta = T[mask], U[mask]
    lim = limit_kernel_circle(th, ta, delta)
    rows = []
    for n in n_list:
        err = np.abs(scaled_kernel(n, delta, th, ta) - lim)
        i = int(np.argmax(err))
        rows.append({"n": int(n), "sup_error": float(err[i]), "argmax": [float(th[i]), float(ta[i])]})
    return rows


def correlation_finite_scaled(n: int, delta, thetas):
    """det[n^{-1} K~_n(theta_i/n, theta_j/n)], the rescaled m-point correlation."""
    t = np.asarray(thetas, dtype=float)
    T, U = np.meshgrid(t, t, indexing="ij")
    return float(np.linalg.det(scaled_kernel(n, delta, T, U)))


def correlation_limit(delta, thetas):
    t = np.asarray(thetas, dtype=float)
    T, U = np.meshgrid(t, t, indexing="ij")
    return float(np.linalg.det(limit_kernel_circle(T, U, delta)))


# -- Cayley transform and the real-line weights -------------------------------

def cayley(theta):
    """tan(theta/2) on (-pi, pi)."""
    th = np.asarray(theta, dtype=float)
    if np.any(np.abs(th) >= np.pi):
        raise DomainError("Cayley transform needs theta in (-pi, pi)")
    return np.tan(0.5 * th)


def cayley_inverse(x):
    return 2.0 * np.arctan(np.asarray(x, dtype=float))


def weight_transport(n: int, delta, x, variant: str = "w1"):
    """w^R(x) = (1 + x^2)^{-n} w^T((1 + ix)/(1 - ix)).

    The inverse is w^T(e^{i theta}) = cos(theta/2)^{-2n} w^R(tan(theta/2)).
    """
    x = np.asarray(x, dtype=float)
    w = weight_w1 if variant == "w1" else weight_w2
    return (1 + x ** 2) ** (-n) * w(cayley_inverse(x), delta)


def pseudo_jacobi_weight(n: int, delta, x):
    """(1 + ix)^{-delta-n} (1 - ix)^{-conj(delta)-n} = 2^{-2a} w2^R(x), w2^R the Cayley image of w2."""
    d = _delta(delta)
    x = np.asarray(x, dtype=float)
    val = (1 + 1j * x) ** (-d.value - n) * (1 - 1j * x) ** (-d.conj - n)
    return val.real


def pseudo_jacobi(m: int, n: int, delta, x):
    """p_m(x) = (x - i)^m 2F1(-m, delta+n-m; 2a+2n-2m; 2/(1+ix)), valid for m < a + n - 1/2."""
    d = _delta(delta)
    if not m < d.a + n - 0.5:
        raise DomainError(f"pseudo-Jacobi degree {m} outside the finite family for n={n}, a={d.a}")
    x = np.asarray(x, dtype=float)
    return (x - 1j) ** m * hyp2f1_terminating(m, d.value + n - m, d.s + 2 * n - 2 * m, 2 / (1 + 1j * x))
