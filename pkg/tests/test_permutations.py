import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from haarforge.enumeration import crp_pushforward
from haarforge.permutations import (Permutation, WreathElement, crp_permutation, cycle_count, ewens_density,
                                    permutation_from_crp_path, sample_wreath, signed_transposition,
                                    transposition, wreath_from_steps, wreath_matrix)

perm = st.integers(1, 7).flatmap(lambda n: st.permutations(list(range(n)))).map(Permutation)


def test_cycle_count_examples():
    assert cycle_count(Permutation.identity(6)) == 6
    assert cycle_count(Permutation((1, 2, 3, 4, 0))) == 1
    assert cycle_count(Permutation.from_cycles(5, [(0, 1), (2,), (3, 4)])) == 3


def test_not_a_permutation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


@given(perm)
def test_matrix_is_a_representation(s):
    t = Permutation(tuple(reversed(s.images)))
    assert np.array_equal(s.compose(t).matrix(), s.matrix() @ t.matrix())
    assert s.compose(s.inverse()) == Permutation.identity(s.n)


def test_crp_n2_transposition_probability():
    theta = 0.8
    law = crp_pushforward(2, theta)
    assert law[(1, 0)] == pytest.approx(1 / (theta + 1))


def test_crp_uniform_when_theta_one():
    law = crp_pushforward(3, 1.0)
    assert len(law) == 6
    assert all(abs(p - 1 / 6) < 1e-15 for p in law.values())


def test_crp_cycles_count_fixed_steps(rng):
    for _ in range(200):
        s, ms = crp_permutation(6, 1.7, rng, return_path=True)
        fixed = sum(m == k for k, m in enumerate(ms, start=1))
        assert cycle_count(s) == fixed + 1


def test_crp_rejects_bad_theta(rng):
    with pytest.raises(ValueError):
        crp_permutation(3, 0.0, rng)


def test_crp_monte_carlo_matches_ewens(rng):
    theta, n, N = 2.0, 3, 60000
    counts = {}
    for _ in range(N):
        key = crp_permutation(n, theta, rng).images
        counts[key] = counts.get(key, 0) + 1
    for p in itertools.permutations(range(n)):
        q = ewens_density(Permutation(p), theta)
        assert abs(counts.get(p, 0) / N - q) < 4 * math.sqrt(q * (1 - q) / N)


def test_ewens_density_values():
    theta = 0.7
    assert ewens_density(Permutation.identity(3), theta) == pytest.approx(theta ** 2 / ((theta + 1) * (theta + 2)))
    for p in itertools.permutations(range(4)):
        assert ewens_density(Permutation(p), 1.0) == pytest.approx(1 / 24)
    total = sum(ewens_density(Permutation(p), 2.5) for p in itertools.permutations(range(4)))
    assert abs(total - 1) < 1e-14


def test_path_with_no_swaps_is_identity():
    assert permutation_from_crp_path([1, 2, 3]) == Permutation.identity(4)


def test_wreath_identity_matrix():
    assert np.array_equal(wreath_matrix(WreathElement.identity(4)), np.eye(4))


def test_wreath_group_law(rng):
    for _ in range(30):
        g = sample_wreath(4, "T", rng)
        h = sample_wreath(4, "Z2", rng)
        assert np.allclose(wreath_matrix(g.compose(h)), wreath_matrix(g) @ wreath_matrix(h))


def test_wreath_characteristic_polynomial(rng):
    for _ in range(30):
        w = sample_wreath(5, "T", rng)
        x = complex(*rng.standard_normal(2))
        lhs = np.linalg.det(x * np.eye(5) - wreath_matrix(w))
        rhs = np.prod([x ** len(c) - w.cycle_weight(c) for c in w.sigma.cycles()])
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_signed_transposition_sends_pivot():
    w = signed_transposition(4, 1, 3, -1.0)
    M = wreath_matrix(w)
    e1 = np.eye(4)[:, 1]
    assert np.allclose(M @ e1, -np.eye(4)[:, 3])
    assert transposition(4, 1, 3) == w.sigma


def test_wreath_from_steps_matches_reflections():
    ms, eps = [2, 1, 2], [1j, -1.0, np.exp(0.3j)]
    w = wreath_from_steps(ms, eps)
    M = np.eye(3, dtype=complex)
    for k in range(3):
        M = M @ wreath_matrix(signed_transposition(3, k, ms[k], eps[k]))
    assert np.allclose(wreath_matrix(w), M)
