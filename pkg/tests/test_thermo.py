import math
from itertools import product

import numpy as np
import pytest

from ergopt import thermo
from ergopt.measures import (MarkovMeasure, markov_cylinder_mass,
                             markov_entropy)
from ergopt.thermo import (free_energy, gibbs_bounds_constant,
                           gibbs_cylinder_mass, perron_eigendata, pressure,
                           pressure_derivative_check, thermo_state)


def random_stochastic(rng, d):
    P = rng.uniform(0.05, 1.0, (d, d))
    return P / P.sum(axis=1, keepdims=True)


def test_perron_line_stochastic_has_unit_radius():
    rng = np.random.default_rng(0)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        data = perron_eigendata(random_stochastic(rng, d))
        assert abs(data.lam - 1.0) < 1e-10
        assert abs(data.r.sum() - 1.0) < 1e-12
        assert abs(data.l @ data.r - 1.0) < 1e-12


def test_perron_all_ones():
    data = perron_eigendata(np.ones((2, 2)))
    assert abs(data.lam - 2.0) < 1e-12
    assert np.abs(data.r - 0.5).max() < 1e-12
    assert np.abs(data.l - 1.0).max() < 1e-12


def test_perron_two_state_closed_form():
    # zero diagonal: lambda = 1 + e^{beta (A12 + A21)/2}
    rng = np.random.default_rng(1)
    for _ in range(10):
        a, b = -rng.uniform(0.2, 2.0, 2)
        beta = float(rng.uniform(0.5, 8.0))
        M = np.exp(beta * np.array([[0.0, a], [b, 0.0]]))
        data = perron_eigendata(M)
        assert abs(data.lam - (1 + math.exp(beta * (a + b) / 2))) < 1e-12


def test_perron_requires_positive_entries():
    with pytest.raises(ValueError):
        perron_eigendata(np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_thermo_state_zero_potential():
    for d in (2, 3, 4):
        st = thermo_state(np.zeros((d, d)), beta=3.0)
        assert abs(st.pressure - math.log(d)) < 1e-12
        assert np.abs(st.P - 1 / d).max() < 1e-12
        assert np.abs(st.pi - 1 / d).max() < 1e-12


def test_thermo_state_beta_zero_matches_zero_potential():
    rng = np.random.default_rng(2)
    A = rng.normal(size=(3, 3))
    st = thermo_state(A, beta=0.0)
    assert abs(st.pressure - math.log(3)) < 1e-12
    assert np.abs(st.P - 1 / 3).max() < 1e-12


def test_free_energy_identity_at_equilibrium():
    rng = np.random.default_rng(3)
    for _ in range(10):
        A = rng.normal(size=(3, 3))
        st = thermo_state(A, beta=1.0)
        fe = free_energy(st.markov_measure(), A, 1.0)
        assert abs(fe - st.pressure) < 1e-9


def test_free_energy_bounded_by_pressure():
    rng = np.random.default_rng(4)
    A = rng.normal(size=(3, 3))
    for beta in (0.5, 1.0, 2.0):
        P = pressure(A, beta)
        for _ in range(40):
            m = MarkovMeasure.from_stochastic(random_stochastic(rng, 3))
            assert free_energy(m, A, beta) <= P + 1e-10


def test_gibbs_equals_markov_product():
    rng = np.random.default_rng(5)
    for _ in range(10):
        d = int(rng.integers(2, 5))
        A = rng.normal(size=(d, d))
        beta = float(rng.uniform(0.2, 4.0))
        st = thermo_state(A, beta)
        m = st.markov_measure()
        for w in [(1,), (d,), (1, d), (d, 1, 1), (1, 2, 1, 2, 1)]:
            w = tuple(min(s, d) for s in w)
            g = gibbs_cylinder_mass(st, A, w)
            mk = markov_cylinder_mass(m, w)
            assert abs(g - mk) <= 1e-12 * mk


def test_gibbs_single_symbol_is_pi():
    rng = np.random.default_rng(6)
    A = rng.normal(size=(3, 3))
    st = thermo_state(A, 1.5)
    for i in (1, 2, 3):
        assert abs(gibbs_cylinder_mass(st, A, (i,)) - st.pi[i - 1]) < 1e-14


def test_gibbs_zero_potential_uniform_depth():
    st = thermo_state(np.zeros((3, 3)), 2.0)
    for n in (1, 2, 4):
        w = tuple(1 for _ in range(n))
        assert abs(gibbs_cylinder_mass(st, np.zeros((3, 3)), w)
                   - 3.0 ** (-n)) < 1e-15


def test_pressure_derivative_matches_integral():
    # constant potential: derivative is the constant, exactly
    c = 0.8
    fd, exact = pressure_derivative_check(np.full((3, 3), c), 1.0, 1e-4)
    assert abs(exact - c) < 1e-12
    assert abs(fd - c) < 1e-8
    rng = np.random.default_rng(7)
    A = rng.normal(size=(3, 3))
    fd, exact = pressure_derivative_check(A, 1.0, 1e-4)
    assert abs(fd - exact) < 1e-6


def test_pressure_derivative_two_state_symbolic():
    # P(beta) = log(1 + e^{beta s/2}) with s = A12 + A21:
    # dP/dbeta = (s/2) e^{beta s/2} / (1 + e^{beta s/2})
    a, b = -0.7, -1.3
    A = np.array([[0.0, a], [b, 0.0]])
    beta, s = 2.0, a + b
    fd, exact = pressure_derivative_check(A, beta, 1e-5)
    symbolic = (s / 2) * math.exp(beta * s / 2) / (1 + math.exp(beta * s / 2))
    assert abs(exact - symbolic) < 1e-10
    assert abs(fd - symbolic) < 1e-8


def test_gibbs_bounds_constant_uniform():
    st = thermo_state(np.zeros((4, 4)), 1.0)
    assert abs(gibbs_bounds_constant(st) - math.log(4)) < 1e-12


def test_gibbs_bounds_constant_grows_with_beta():
    eps = np.array([[0.0, 1, 2], [1, 0, 3], [2, 3, 1]])
    vals = [gibbs_bounds_constant(thermo_state(-eps, b))
            for b in (5.0, 20.0, 60.0, 150.0)]
    assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))


def test_gibbs_bound_holds_on_words():
    rng = np.random.default_rng(8)
    A = rng.normal(size=(3, 3))
    st = thermo_state(A, 1.0)
    C = gibbs_bounds_constant(st)
    m = st.markov_measure()
    for n in range(1, 7):
        for w in product((1, 2, 3), repeat=n):
            sn = sum(A[w[k] - 1, w[k + 1] - 1] for k in range(n - 1))
            ref = math.exp(sn - (n - 1) * st.pressure)
            ratio = markov_cylinder_mass(m, w) / ref
            assert math.exp(-C) - 1e-12 <= ratio <= math.exp(C) + 1e-12


def test_pressure_convex_and_asymptote_monotone():
    rng = np.random.default_rng(9)
    A = rng.normal(size=(3, 3))
    from ergopt.aubry import max_ergodic_value
    m = max_ergodic_value(A)
    betas = np.linspace(0.2, 20.0, 40)
    Ps = np.array([pressure(A, b) for b in betas])
    second = np.diff(Ps, 2)
    assert second.min() >= -1e-9
    excess = Ps - betas * m
    assert (np.diff(excess) <= 1e-10).all()
    assert (excess >= -1e-12).all()


def test_transpose_preserves_log_lambda():
    rng = np.random.default_rng(10)
    for beta in (1.0, 7.0, 60.0):
        A = rng.normal(size=(3, 3))
        la = thermo.perron_log(beta * A).log_lambda
        lat = thermo.perron_log(beta * A.T).log_lambda
        assert abs(la - lat) <= 1e-12 * max(1.0, abs(la))


def test_perron_residual_invariants():
    rng = np.random.default_rng(11)
    for _ in range(30):
        d = int(rng.integers(2, 7))
        M = rng.uniform(0.02, 1.0, (d, d))
        data = perron_eigendata(M)
        res_r = np.abs(M @ data.r - data.lam * data.r).max() / data.lam
        res_l = np.abs(data.l @ M - data.lam * data.l).max() / data.lam
        assert res_r <= 1e-10 and res_l <= 1e-10


def test_large_beta_pressure_via_mp_path():
    # two nearly decoupled fixed points: pressure decays like e^{-beta}
    eps = np.array([[0.0, 1, 2], [1, 0, 3], [2, 3, 1]])
    st = thermo_state(-eps, 300.0)
    assert st.pressure > 0
    assert abs(math.log(st.pressure) / 300.0 - (-1.0)) < 2e-2
    assert abs(st.pi[0] - 0.5) < 1e-9 and abs(st.pi[1] - 0.5) < 1e-9


def test_state_json_export():
    A = np.array([[0.0, -1.0], [-2.0, 0.0]])
    st = thermo_state(A, 2.0)
    data = thermo.state_to_json(st)
    assert data["beta"] == 2.0 and data["d"] == 2
    assert abs(data["pressure"] - st.pressure) == 0.0
    back = thermo.potential_from_json(thermo.potential_to_json(A))
    assert np.array_equal(back, A)
