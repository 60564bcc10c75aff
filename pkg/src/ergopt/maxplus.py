"""Max-plus (tropical) semiring and its linear algebra.

Scalars live in R u {-inf} with a (+) b = max(a, b) and a (x) b = a + b;
-inf is the additive identity and 0 the multiplicative one.  Matrix products
and eigenproblems use these operations.  The one sharp edge of the float
representation is the product with -inf, which must absorb regardless of the
other operand; ``mp_mul`` short-circuits so the convention x (x) -inf = -inf
holds exactly and no NaN can leak out of a subtraction downstream.

A real-entry square matrix has exactly one max-plus eigenvalue, equal to its
maximum cycle mean; eigenvectors need not be unique.  ``mp_eigen`` first runs
the normalized fixed-point map

    (Tx)_i = max_j(M_ij + x_j) - min_k max_j(M_kj + x_j)

whose fixed points are eigenvectors, and falls back to an explicit
construction (Karp's cycle-mean value plus a Kleene-star column at a
critical node) when the iteration cycles without settling, which can happen
on ties.
"""

from __future__ import annotations

import numpy as np

NEG_INF = float("-inf")


def mp_add(a: float, b: float) -> float:
    """Semiring sum: max(a, b)."""
    return a if a >= b else b


def mp_mul(a: float, b: float) -> float:
    """Semiring product: a + b, with x (x) -inf = -inf short-circuited."""
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def mp_identity(n: int) -> np.ndarray:
    I = np.full((n, n), NEG_INF)
    np.fill_diagonal(I, 0.0)
    return I


def mp_mat_mul(A, B) -> np.ndarray:
    """(AB)_ij = max_k (A_ik + B_kj)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions disagree: {A.shape} x {B.shape}")
    # broadcast sum has no -inf + +inf pairs (only -inf appears), so no NaN
    return np.max(A[:, :, None] + B[None, :, :], axis=1)


def mp_mat_vec(A, v) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.max(A + v[None, :], axis=1)


def max_cycle_mean(M) -> float:
    """Maximum over cycles of (cycle weight / cycle length), by Karp.

    Independent of the eigen solver; for a real matrix this equals the
    max-plus eigenvalue.  D[k, v] is the best weight of a k-edge walk from
    the fixed source 0 to v, and the answer is
    max_v min_k (D[n, v] - D[k, v]) / (n - k).
    """
    M = np.asarray(M, dtype=float)
    if not np.isfinite(M).all():
        raise ValueError("max_cycle_mean needs finite entries")
    n = M.shape[0]
    D = np.full((n + 1, n), NEG_INF)
    D[0, 0] = 0.0
    for k in range(1, n + 1):
        D[k] = np.max(D[k - 1][:, None] + M, axis=0)
    best = NEG_INF
    for v in range(n):
        worst = min((D[n, v] - D[k, v]) / (n - k)
                    for k in range(n) if D[k, v] > NEG_INF)
        best = max(best, worst)
    return float(best)


def kleene_closure(B) -> np.ndarray:
    """B+ = B (+) B^2 (+) ... : best walk weights, all lengths >= 1.

    Requires all cycle weights <= 0 (true for B = M - lambda(M)); plain
    Floyd-Warshall relaxation then computes the closure.
    """
    n = np.asarray(B).shape[0]
    C = np.asarray(B, dtype=float).copy()
    for k in range(n):
        # no NaN: entries are in R u {-inf} only
        C = np.maximum(C, C[:, k, None] + C[None, k, :])
    return C


def critical_nodes(B, tol: float = 1e-9):
    """Nodes lying on a zero-weight cycle of B (weights normalized <= 0)."""
    closure = kleene_closure(B)
    return [i for i in range(B.shape[0]) if closure[i, i] >= -tol], closure


def eigenvector_from_kleene(M, lam: float, tol: float = 1e-9):
    """Eigenvector of M for lambda as a Kleene-star column.

    The column of (M - lambda)* at the lowest-index critical node is always
    an eigenvector; deterministic, used for subaction selection.
    """
    M = np.asarray(M, dtype=float)
    B = M - lam
    crit, closure = critical_nodes(B, tol)
    if not crit:
        raise ArithmeticError("no critical node found; lambda inaccurate?")
    c = crit[0]
    v = closure[:, c].copy()
    v[c] = max(v[c], 0.0)  # star column: empty path at the root
    return v, crit


def mp_eigen(M, maxiter: int | None = None, tol: float = 1e-12):
    """Max-plus eigenpair (lambda, v) of a real-entry square matrix.

    Runs the normalized fixed-point map for up to 50*d iterations (the
    convergence speed of that map is not quantified, hence the cap), then
    falls back to Karp + Kleene star.  lambda is unique; v is one valid
    eigenvector, not canonical.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("square matrix required")
    if not np.isfinite(M).all():
        raise ValueError("mp_eigen requires real (finite) entries; use "
                         "mp_eigen_check to verify pairs for -inf matrices")
    d = M.shape[0]
    if maxiter is None:
        maxiter = 50 * d
    x = np.zeros(d)
    for _ in range(maxiter):
        y = mp_mat_vec(M, x)
        nxt = y - y.min()
        if np.abs(nxt - x).max() <= tol:
            lam = float(y.min())
            ok, _ = mp_eigen_check(M, lam, nxt, tol=max(tol, 1e-9))
            if ok:
                return lam, nxt
            break
        x = nxt
    lam = max_cycle_mean(M)
    v, _ = eigenvector_from_kleene(M, lam)
    return lam, v


def mp_eigen_check(M, lam: float, v, tol: float = 1e-9):
    """Row-by-row verification of max_j(M_ij + v_j) = lambda + v_i.

    Works for matrices with -inf entries (where solving is out of scope but
    checking a claimed pair is well defined).  Rows where both sides are
    -inf count as satisfied.  Returns (ok, residual).
    """
    M = np.asarray(M, dtype=float)
    v = np.asarray(v, dtype=float)
    lhs = mp_mat_vec(M, v)
    rhs = np.array([mp_mul(lam, vi) for vi in v])
    resid = 0.0
    for a, b in zip(lhs, rhs):
        if a == NEG_INF and b == NEG_INF:
            continue
        if a == NEG_INF or b == NEG_INF:
            return False, float("inf")
        resid = max(resid, abs(a - b))
    return resid <= tol, resid


# --- serialization (-inf encoded as the string "-inf") ---

def matrix_to_json(M) -> list:
    out = []
    for row in np.asarray(M, dtype=float):
        out.append(["-inf" if x == NEG_INF else float(x) for x in row])
    return out


def matrix_from_json(rows) -> np.ndarray:
    def conv(x):
        if isinstance(x, str):
            if x.strip().lower() in ("-inf", "-infinity"):
                return NEG_INF
            raise ValueError(f"bad entry {x!r}")
        return float(x)
    return np.array([[conv(x) for x in row] for row in rows], dtype=float)
