import math

import numpy as np
import pytest

from ergopt import measures, shifts
from ergopt.measures import (MarkovMeasure, PeriodicOrbitMeasure,
                             bernoulli_measure, birkhoff_average,
                             integrate_potential, kl_divergence,
                             markov_cylinder_mass, markov_entropy,
                             periodic_cylinder_mass, stationary_vector)


def coin(p=0.5):
    return bernoulli_measure(np.array([p, 1 - p]))


def test_stationary_vector_two_state_closed_form():
    p, q = 0.7, 0.4
    P = np.array([[p, 1 - p], [1 - q, q]])
    pi = stationary_vector(P)
    # left 1-eigenvector is proportional to (1-q, 1-p)
    expect = np.array([1 - q, 1 - p]) / (2 - p - q)
    assert np.abs(pi - expect).max() < 1e-13
    assert abs(pi[0] - 2 / 3) < 1e-13


def test_stationary_vector_uniform():
    d = 5
    pi = stationary_vector(np.full((d, d), 1 / d))
    assert np.abs(pi - 1 / d).max() < 1e-14


def test_stationary_vector_vs_solver_oracles():
    rng = np.random.default_rng(3)
    for _ in range(20):
        P = rng.uniform(0.05, 1.0, (4, 4))
        P /= P.sum(axis=1, keepdims=True)
        pi = stationary_vector(P)
        # oracle 1: direct linear solve of (P^T - I) pi = 0, sum pi = 1
        M = np.vstack([P.T - np.eye(4), np.ones(4)])
        rhs = np.array([0.0, 0, 0, 0, 1.0])
        sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        assert np.abs(pi - sol).max() < 1e-10
        # oracle 2: repeated squaring of the kernel
        Q = np.linalg.matrix_power(P, 2 ** 12)
        assert np.abs(Q - pi[None, :]).max() < 1e-10


def test_stationary_vector_requires_positive():
    with pytest.raises(ValueError):
        stationary_vector(np.array([[1.0, 0.0], [0.0, 1.0]]))


def test_markov_cylinder_mass_coin():
    p, q = 0.6, 0.4
    m = coin(p)
    # tail then head twice
    assert abs(markov_cylinder_mass(m, (2, 1, 1)) - q * p * p) < 1e-15
    assert markov_cylinder_mass(m, ()) == 1.0


def test_cylinder_mass_consistency_and_total():
    rng = np.random.default_rng(5)
    P = rng.uniform(0.1, 1.0, (3, 3))
    P /= P.sum(axis=1, keepdims=True)
    m = MarkovMeasure.from_stochastic(P)
    for w in [(1,), (3, 2), (2, 1, 1)]:
        kids = shifts.cylinder_refinement_children(w, 3)
        assert abs(sum(markov_cylinder_mass(m, k) for k in kids)
                   - markov_cylinder_mass(m, w)) < 1e-14
    # shift invariance: prepending symbols recovers the parent mass
    for w in [(1,), (2, 3)]:
        total = sum(markov_cylinder_mass(m, (a,) + w) for a in (1, 2, 3))
        assert abs(total - markov_cylinder_mass(m, w)) < 1e-14
    # partition of the whole space at depth n
    from itertools import product
    for n in (1, 2, 3, 4):
        tot = sum(markov_cylinder_mass(m, w)
                  for w in product((1, 2, 3), repeat=n))
        assert abs(tot - 1.0) < 1e-12


def test_markov_entropy_values():
    assert abs(markov_entropy(coin(0.5)) - math.log(2)) < 1e-15
    p, q = 0.3, 0.7
    expect = -p * math.log(p) - q * math.log(q)
    assert abs(markov_entropy(coin(p)) - expect) < 1e-15
    # deterministic rotation has zero entropy
    P = np.array([[0.0, 1, 0], [0, 0, 1], [1, 0, 0]])
    m = MarkovMeasure(P, np.full(3, 1 / 3))
    assert markov_entropy(m) == 0.0


def test_markov_entropy_bounded_by_log_d():
    rng = np.random.default_rng(9)
    for _ in range(50):
        d = int(rng.integers(2, 5))
        P = rng.uniform(0.01, 1.0, (d, d))
        P /= P.sum(axis=1, keepdims=True)
        m = MarkovMeasure.from_stochastic(P)
        assert markov_entropy(m) <= math.log(d) + 1e-12


def test_kl_divergence_values():
    u = np.array([0.5, 0.5])
    assert kl_divergence(u, u) == 0.0
    assert abs(kl_divergence(np.array([1.0, 0.0]), u) - math.log(2)) < 1e-15
    got = kl_divergence(np.array([0.25, 0.75]), np.array([0.75, 0.25]))
    assert abs(got - 0.5 * math.log(3)) < 1e-15


def test_kl_divergence_nonneg_and_support():
    rng = np.random.default_rng(13)
    for _ in range(500):
        d = int(rng.integers(2, 6))
        q = rng.uniform(0.0, 1.0, d)
        p = rng.uniform(1e-3, 1.0, d)
        q /= q.sum()
        p /= p.sum()
        val = kl_divergence(q, p)
        assert val >= -1e-12
        if np.abs(q - p).max() < 1e-13:
            assert val < 1e-12
    with pytest.raises(ValueError):
        kl_divergence(np.array([0.5, 0.5]), np.array([1.0, 0.0]))


def test_periodic_cylinder_mass():
    m = PeriodicOrbitMeasure(shifts.PeriodicOrbit((1, 2)))
    assert periodic_cylinder_mass(m, (1, 2)) == 0.5
    m1 = PeriodicOrbitMeasure(shifts.PeriodicOrbit((1,)))
    assert periodic_cylinder_mass(m1, (1, 1, 1)) == 1.0
    m3 = PeriodicOrbitMeasure(shifts.PeriodicOrbit((1, 2, 3)))
    assert periodic_cylinder_mass(m3, (2,)) == pytest.approx(1 / 3)


def test_integrate_potential_indicator():
    p, q = 0.6, 0.4
    m = coin(p)
    # indicator of the cylinder [2] as a two-coordinate potential
    A = np.array([[0.0, 0.0], [1.0, 1.0]])
    assert abs(integrate_potential(A, m) - q) < 1e-15
    # constants integrate to themselves
    assert abs(integrate_potential(np.full((2, 2), 3.7), m) - 3.7) < 1e-14


def test_integrate_potential_periodic():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(2, 2))
    m = PeriodicOrbitMeasure(shifts.PeriodicOrbit((1, 2)))
    assert abs(integrate_potential(A, m)
               - 0.5 * (A[0, 1] + A[1, 0])) < 1e-15


def test_birkhoff_average_law_of_large_numbers():
    m = coin(0.5)
    A = np.array([[0.0, 0.0], [1.0, 1.0]])  # indicator of [2]
    got = birkhoff_average(A, m, 10 ** 5, seed=42)
    assert abs(got - 0.5) < 0.02


def test_birkhoff_average_deterministic_chains():
    # fixed point: the chain never leaves symbol 1
    P = np.array([[1.0, 0.0], [0.0, 1.0]])
    m = MarkovMeasure(P, np.array([1.0, 0.0]))
    A = np.array([[2.5, 0.0], [0.0, -1.0]])
    assert birkhoff_average(A, m, 50, seed=1) == 2.5
    # period-two rotation: exact cycle mean for even n
    P2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    m2 = MarkovMeasure(P2, np.array([0.5, 0.5]))
    rng = np.random.default_rng(4)
    A2 = rng.normal(size=(2, 2))
    got = birkhoff_average(A2, m2, 1000, seed=7)
    assert abs(got - 0.5 * (A2[0, 1] + A2[1, 0])) < 1e-12


def test_birkhoff_average_reproducible():
    m = coin(0.3)
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert (birkhoff_average(A, m, 1000, seed=5)
            == birkhoff_average(A, m, 1000, seed=5))


def test_measure_json_roundtrip():
    m = coin(0.25)
    back = measures.measure_from_json(measures.measure_to_json(m))
    assert np.allclose(back.P, m.P) and np.allclose(back.pi, m.pi)


def test_markov_measure_validation():
    with pytest.raises(ValueError):
        MarkovMeasure(np.array([[0.5, 0.5], [0.5, 0.5]]),
                      np.array([0.9, 0.1]))  # not stationary
    with pytest.raises(ValueError):
        MarkovMeasure(np.array([[0.6, 0.6], [0.5, 0.5]]),
                      np.array([0.5, 0.5]))  # rows exceed 1
