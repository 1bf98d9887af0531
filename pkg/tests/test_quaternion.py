import numpy as np
import pytest
from hypothesis import given, strategies as st

from haarforge.quaternion import (Quaternion, embed_quaternion, phi, qadjoint, qconj, qeye, qinv, qmatmul,
                                  qmul, z_tilde)

coord = st.floats(-5, 5, allow_nan=False)
quat = st.tuples(coord, coord, coord, coord).map(np.array)


def test_units_multiply_like_hamilton():
    one, i, j, k = np.eye(4)
    assert np.allclose(qmul(i, j), k)
    assert np.allclose(qmul(j, i), -k)
    assert np.allclose(qmul(k, k), -one)
    assert np.allclose(qmul(qmul(i, j), k), -one)


@given(quat, quat, quat)
def test_associative(p, q, r):
    lhs = qmul(qmul(p, q), r)
    rhs = qmul(p, qmul(q, r))
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(lhs).max()))


@given(quat)
def test_norm_is_x_xbar(q):
    assert np.allclose(qmul(q, qconj(q)), [np.dot(q, q), 0, 0, 0], atol=1e-10 * (1 + np.dot(q, q)))


@given(quat, quat)
def test_phi_ring_morphism(p, q):
    assert np.allclose(phi(qmul(p, q)), phi(p) @ phi(q), atol=1e-12 * (1 + np.abs(p).max() * np.abs(q).max()))
    assert np.allclose(phi(qconj(p)), phi(p).conj().T)


def test_phi_of_one_is_identity():
    assert np.array_equal(phi(np.array([1.0, 0, 0, 0])), np.eye(2))


def test_embedding_is_multiplicative(rng):
    A = rng.standard_normal((3, 3, 4))
    B = rng.standard_normal((3, 3, 4))
    assert np.allclose(embed_quaternion(qmatmul(A, B)), embed_quaternion(A) @ embed_quaternion(B))
    assert np.allclose(embed_quaternion(qadjoint(A)), embed_quaternion(A).conj().T)
    assert np.allclose(embed_quaternion(qeye(3)), np.eye(6))


def test_z_tilde_shape():
    Z = z_tilde(2)
    assert np.array_equal(Z, [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])


def test_quaternion_scalar_class():
    x = Quaternion(1, 2, -1, 0.5)
    y = Quaternion(0.3, -1, 2, 1)
    assert np.allclose((x * y).to_array(), qmul(x.to_array(), y.to_array()))
    assert np.allclose(((x / y) * y).to_array(), x.to_array())
    assert abs(x) == pytest.approx(np.sqrt(6.25))
    assert np.allclose((x * x.inverse()).to_array(), [1, 0, 0, 0])
    assert (2 * x - x).to_array() == pytest.approx(x.to_array())
    assert np.allclose(x.matrix(), phi(x.to_array()))
    assert np.allclose(qinv(x.to_array()), x.inverse().to_array())
