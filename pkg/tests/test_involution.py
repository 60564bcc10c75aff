import numpy as np
import pytest

from conftest import CH7_ASYMMETRIC
from ergopt import thermo
from ergopt.involution import (dual_eigenvalue_identity, dual_potential,
                               kernel_matrix, twist_check)

BOOK_KERNEL = np.array([[2.0, 7.0], [6.0, 5.0]])


def test_dual_potential_book_example():
    A = BOOK_KERNEL
    assert np.array_equal(dual_potential(A), np.array([[2.0, 6.0],
                                                       [7.0, 5.0]]))
    assert np.array_equal(dual_potential(dual_potential(A)), A)
    S = np.array([[1.0, 3.0], [3.0, -2.0]])
    assert np.array_equal(dual_potential(S), S)  # symmetric fixed point


def test_kernel_matrix_book_example():
    # W = 2 chi[1|1] + 5 chi[2|2] + 7 chi[1|2] + 6 chi[2|1]
    W = kernel_matrix(BOOK_KERNEL)
    assert W[0, 0] == 2.0 and W[1, 1] == 5.0
    assert W[0, 1] == 7.0 and W[1, 0] == 6.0
    assert np.array_equal(kernel_matrix(np.zeros((3, 3))), np.zeros((3, 3)))


def test_kernel_additivity():
    rng = np.random.default_rng(0)
    A1, A2 = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
    assert np.array_equal(kernel_matrix(A1 + A2),
                          kernel_matrix(A1) + kernel_matrix(A2))


def test_twist_book_example():
    res = twist_check(BOOK_KERNEL)
    assert res.ok and res.violation is None and not res.tie
    # 2 + 5 < 7 + 6 is the defining inequality


def test_twist_zero_kernel_is_tie():
    res = twist_check(np.zeros((2, 2)))
    assert not res.ok and res.tie
    assert res.violation == (1, 1, 2, 2)


def test_twist_positive_multiple_closure():
    rng = np.random.default_rng(1)
    for _ in range(20):
        W = rng.normal(size=(3, 3))
        base = twist_check(W).ok
        for c in (0.5, 2.0, 7.5):
            assert twist_check(c * W).ok == base


def test_twist_reversal_detected():
    # reversed rectangle inequality: fails without a tie
    W = np.array([[5.0, 0.0], [0.0, 5.0]])
    res = twist_check(W)
    assert not res.ok and not res.tie


def test_dual_eigenvalue_identity_random():
    rng = np.random.default_rng(2)
    for _ in range(10):
        A = rng.normal(size=(3, 3))
        la, lat = dual_eigenvalue_identity(A, 1.0)
        assert abs(la - lat) <= 1e-12 * max(1.0, abs(la))


def test_dual_eigenvalue_identity_chapter7_large_beta():
    A = -CH7_ASYMMETRIC
    la, lat = dual_eigenvalue_identity(A, 50.0)
    assert abs(la - lat) <= 1e-12 * max(1.0, abs(la))


def test_left_right_swap_under_transpose():
    rng = np.random.default_rng(3)
    for beta in (1.0, 4.0):
        A = rng.normal(size=(4, 4))
        data = thermo.perron_log(beta * A)
        data_T = thermo.perron_log(beta * A.T)
        # l of M is r of M^T up to the normalization split: compare after
        # renormalizing both to sum 1 in linear scale
        l = np.exp(data.log_l)
        r_T = np.exp(data_T.log_r)
        assert np.abs(l / l.sum() - r_T / r_T.sum()).max() < 1e-10
        r = np.exp(data.log_r)
        l_T = np.exp(data_T.log_l)
        assert np.abs(r / r.sum() - l_T / l_T.sum()).max() < 1e-10


def test_symmetric_potential_has_equal_sides():
    S = np.array([[0.0, -1.0], [-1.0, 0.0]])
    data = thermo.perron_log(3.0 * S)
    l = np.exp(data.log_l)
    r = np.exp(data.log_r)
    assert np.abs(l / l.sum() - r / r.sum()).max() < 1e-12
