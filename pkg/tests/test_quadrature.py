import numpy as np
import pytest
from scipy.special import gamma

from haarforge.quadrature import circle_rule, composite, gauss_legendre, graded_rule, line_rule


def test_gauss_legendre_polynomial_exactness():
    x, w = gauss_legendre(10, -1.0, 2.0)
    assert np.sum(x ** 19 * w) == pytest.approx((2 ** 20 - 1) / 20, rel=1e-13)


def test_composite_covers_interval():
    x, w = composite([0.0, 0.5, 2.0], order=8)
    assert np.sum(w) == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("p", [-0.49, -0.3, 0.0, 0.25, 1.3])
def test_graded_rule_endpoint_power(p):
    x, w = graded_rule(0.0, 1.0, p, toward="lo")
    assert np.sum(x ** p * np.cos(x) * w) == pytest.approx(
        float(np.real(sum((-1) ** k / (gamma(2 * k + 1) * (2 * k + p + 1)) for k in range(30)))), rel=1e-12)
    x, w = graded_rule(0.0, 1.0, p, toward="hi")
    assert np.sum((1 - x) ** p * w) == pytest.approx(1 / (p + 1), rel=1e-12)


@pytest.mark.parametrize("a", [-0.49, -0.45, -0.3, 0.25, 0.7])
def test_circle_rule_singular_weight(a):
    # (1/2pi) int (2 - 2cos t)^a dt = Gamma(1 + 2a) / Gamma(1 + a)^2
    x, w = circle_rule(2 * a)
    val = np.sum((4 * np.sin(0.5 * x) ** 2) ** a * w) / (2 * np.pi)
    assert val == pytest.approx(gamma(1 + 2 * a) / gamma(1 + a) ** 2, rel=1e-12)


def test_circle_rule_edge_singularity():
    a = -0.4
    x, w = circle_rule(2 * a, singular_at=np.pi)
    val = np.sum((4 * np.cos(0.5 * x) ** 2) ** a * w) / (2 * np.pi)
    assert val == pytest.approx(gamma(1 + 2 * a) / gamma(1 + a) ** 2, rel=1e-12)


def test_line_rule_cauchy_mass():
    x, w = line_rule(1e4)
    mass = np.sum(w / (np.pi * (1 + x * x)))
    assert mass == pytest.approx(1 - 2 * np.arctan(1e-4) / np.pi, rel=1e-10)
