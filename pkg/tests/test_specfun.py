import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import loggamma

from haarforge.errors import ConvergenceError, PoleError
from haarforge.specfun import (GammaRatioSpec, gamma_ratio, hyp1f1, hyp1f1_deriv, hyp2f1_terminating,
                               log_gamma, pochhammer, rgamma)

finite = st.floats(-3, 3, allow_nan=False)


def away_from_poles(z, margin=0.1):
    return abs(z.imag) > margin or min(abs(z.real - k) for k in range(-60, 1)) > margin


# pochhammer

def test_pochhammer_trivial():
    assert pochhammer(3.7 + 1j, 0) == 1
    assert pochhammer(1, 4) == 24
    assert pochhammer(0.5, 2) == pytest.approx(0.75)


def test_pochhammer_negative_k():
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


# log gamma

def test_log_gamma_values():
    assert abs(log_gamma(1.0)) < 1e-15
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)


@pytest.mark.parametrize("z", [0, -1, -7, -30.0])
def test_log_gamma_poles(z):
    with pytest.raises(PoleError):
        log_gamma(z)


def test_log_gamma_against_scipy(rng):
    # scipy's loggamma is an independent implementation on the same branch
    z = rng.uniform(-50, 50, 2000) + 1j * rng.uniform(-50, 50, 2000)
    z = z[np.abs(z) <= 50]
    z = z[[away_from_poles(x, 1e-3) for x in z]]
    ours = log_gamma(z)
    ref = loggamma(z)
    err = np.abs(ours - ref) / np.maximum(1.0, np.abs(ref))
    assert err.max() < 1e-13


@given(st.floats(0.01, 40), st.floats(-40, 40))
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    assert np.exp(log_gamma(z + 1) - log_gamma(z)) == pytest.approx(z, rel=1e-12)


def test_log_gamma_large_imaginary_part():
    z = 0.3 + 45j
    assert log_gamma(z) == pytest.approx(complex(mpmath.loggamma(z)), rel=1e-13)


def test_rgamma_zero_at_poles():
    assert rgamma(-3) == 0
    assert rgamma(4.0) == pytest.approx(1 / 6)


# gamma ratios

def test_gamma_ratio_trivial():
    assert gamma_ratio([1], [1]) == pytest.approx(1)
    assert gamma_ratio(GammaRatioSpec([3], [2, 2])) == pytest.approx(2)


def test_gamma_ratio_no_overflow():
    # Gamma(300)/Gamma(299) = 299 although each factor overflows a double
    assert gamma_ratio([300], [299]) == pytest.approx(299, rel=1e-12)


def test_gamma_ratio_poles():
    with pytest.raises(PoleError):
        gamma_ratio([0], [1])
    with pytest.raises(PoleError):
        gamma_ratio([1], [-2])
    assert gamma_ratio([1], [-2], allow_denominator_poles=True) == 0


def test_gamma_ratio_asymptotics():
    # Gamma(n+c)/Gamma(n) n^{-c} = 1 + c(c-1)/(2n) + O(n^-2)
    n, c = 1000, 0.7 + 0.3j
    r = gamma_ratio([n + c], [n]) / n ** c
    assert abs(r - 1) <= abs(c * (c - 1)) / n
    assert abs(r - 1 - c * (c - 1) / (2 * n)) <= abs(c * (c - 1)) / n ** 2 * 5


# terminating 2F1

def test_hyp2f1_trivial():
    assert hyp2f1_terminating(5, 1.3, 2.2, 0) == 1
    assert hyp2f1_terminating(1, 2, 4, 1) == pytest.approx(0.5)
    z = np.array([0.3, -1.2 + 0.5j, 2.0])
    assert np.allclose(hyp2f1_terminating(2, 1, 1, z), (1 - z) ** 2)


def test_hyp2f1_pole():
    with pytest.raises(PoleError):
        hyp2f1_terminating(3, 1.0, -1.0, 0.5)
    # c = -3 is fine for n = 3: only (c)_k with k <= 3 appear, and (c)_3 = -6 != 0... but (c)_4 is not used
    hyp2f1_terminating(3, 1.0, -3.5, 0.5)


def test_hyp2f1_against_mpmath(rng):
    for _ in range(100):
        n = int(rng.integers(0, 15))
        b = complex(*rng.uniform(-3, 3, 2))
        c = complex(*rng.uniform(-3, 3, 2))
        z = complex(*rng.uniform(-1.5, 1.5, 2))
        if not all(abs(c + j) > 0.1 for j in range(n)):
            continue
        ref = complex(mpmath.hyp2f1(-n, b, c, z))
        assert abs(hyp2f1_terminating(n, b, c, z) - ref) <= 1e-11 * (1 + abs(ref))


def test_hyp2f1_cancellation_fallback():
    # large degree near z = 1 where the forward sum cancels badly
    n, b, c, z = 200, 0.4 + 0.1j, 1.8, 0.999 + 0.001j
    with mpmath.workdps(60):
        ref = complex(mpmath.hyp2f1(-n, b, c, z))
    assert abs(hyp2f1_terminating(n, b, c, z) - ref) <= 1e-9 * abs(ref)


def test_hyp2f1_vectorized_matches_scalar(rng):
    z = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    vec = hyp2f1_terminating(6, 0.3 - 0.2j, 1.7, z)
    assert np.allclose(vec, [hyp2f1_terminating(6, 0.3 - 0.2j, 1.7, x) for x in z], rtol=1e-14)


# 1F1

def test_hyp1f1_trivial():
    assert hyp1f1(0.3 + 1j, 2.5, 0) == 1
    z = np.array([0.5, -2.0 + 1j, 3j])
    assert np.allclose(hyp1f1(1.7, 1.7, z), np.exp(z), rtol=1e-14)
    assert hyp1f1(1, 2, 1) == pytest.approx(math.e - 1, rel=1e-14)


def test_hyp1f1_errors():
    with pytest.raises(PoleError):
        hyp1f1(1.0, -2.0, 0.5)
    with pytest.raises(ConvergenceError):
        hyp1f1(1.0, 2.0, 250.0)


@pytest.mark.parametrize("z", [3j, -3j, 30j, 100j, -150 + 20j, 12.0, -40.0, 80 - 80j])
def test_hyp1f1_against_mpmath(z):
    b, c = 0.7 + 0.4j, 2.4 - 0.4j
    ref = complex(mpmath.hyp1f1(b, c, z))
    assert abs(hyp1f1(b, c, z) - ref) <= 1e-12 * (1 + abs(ref))


@given(finite, finite, finite, finite)
def test_hyp1f1_kummer_property(br, bi, zr, zi):
    b, c, z = complex(br, bi), 1.5 + 0.3j, complex(zr, zi)
    lhs = np.exp(z) * hyp1f1(b, c, -z)
    rhs = hyp1f1(c - b, c, z)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_hyp1f1_derivative():
    b, c, z, h = 0.4 - 0.3j, 1.9, 1.2 + 2.0j, 1e-5
    fd = (hyp1f1(b, c, z + h) - hyp1f1(b, c, z - h)) / (2 * h)
    assert abs(fd - hyp1f1_deriv(b, c, z)) < 1e-8
