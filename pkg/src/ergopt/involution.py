"""Duality for two-coordinate potentials: transpose, kernel, twist.

For a potential that reads only the first two symbols, time reversal is
plain matrix transposition: the dual potential is A*(i, j) = A(j, i) and the
pairing kernel on two-sided cylinders [i | j] takes the value W(i, j) =
A(i, j) (past symbol i = w0 paired with future symbol j = x0).  Transposing
preserves the spectral radius, which is the eigenvalue duality used as a
regression check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .thermo import perron_log, validate_potential


def dual_potential(A) -> np.ndarray:
    """A*(i, j) = A(j, i)."""
    return validate_potential(A).T.copy()


def kernel_matrix(A) -> np.ndarray:
    """Kernel on two-sided cylinders: W(i, j) = A(i, j) with the past symbol
    first.  Additive in A."""
    return validate_potential(A).copy()


@dataclass(frozen=True)
class TwistResult:
    ok: bool
    violation: tuple | None  # (i, j, i2, j2), 1-based, first failure
    tie: bool


def twist_check(W) -> TwistResult:
    """Strict rectangle inequality W(i,j) + W(i',j') < W(i,j') + W(i',j)
    for all i < i', j < j'.

    Zero tolerance by design: an exact tie is a failure, flagged separately
    from a reversed inequality.
    """
    W = validate_potential(W)
    d = W.shape[0]
    if d < 2:
        raise ValueError("twist needs at least two symbols")
    for i in range(d):
        for i2 in range(i + 1, d):
            for j in range(d):
                for j2 in range(j + 1, d):
                    lhs = float(W[i, j] + W[i2, j2])
                    rhs = float(W[i, j2] + W[i2, j])
                    if not lhs < rhs:
                        return TwistResult(False,
                                           (i + 1, j + 1, i2 + 1, j2 + 1),
                                           tie=(lhs == rhs))
    return TwistResult(True, None, False)


def dual_eigenvalue_identity(A, beta: float):
    """(log lambda(beta A), log lambda(beta A*)) from two independent
    Perron solves; equal up to rounding since transposition preserves the
    spectrum."""
    A = validate_potential(A)
    log_lam = perron_log(beta * A).log_lambda
    log_lam_dual = perron_log(beta * dual_potential(A)).log_lambda
    return float(log_lam), float(log_lam_dual)
