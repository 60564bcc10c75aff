"""Markov, Bernoulli and periodic-orbit measures on the full shift.

A Markov measure is determined by a line-stochastic matrix P and its
stationary vector pi through the product formula

    mu([x0 ... xk]) = pi[x0] * P(x0, x1) * ... * P(x_{k-1}, xk).

Entropy is always in nats (the log d bound is quoted in nats as well).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .shifts import PeriodicOrbit, validate_word

ROW_SUM_TOL = 1e-12
STATIONARY_TOL = 1e-10


def validate_probability_vector(pi) -> np.ndarray:
    pi = np.asarray(pi, dtype=float)
    if pi.ndim != 1 or (pi < 0).any():
        raise ValueError("probability vector must be 1-d and nonnegative")
    if abs(pi.sum() - 1.0) > ROW_SUM_TOL:
        raise ValueError(f"probability vector sums to {pi.sum()!r}, not 1")
    return pi


def validate_stochastic_matrix(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or (P < 0).any():
        raise ValueError("stochastic matrix must be square and nonnegative")
    if np.abs(P.sum(axis=1) - 1.0).max() > ROW_SUM_TOL:
        raise ValueError("rows must sum to 1 within 1e-12")
    return P


def stationary_vector(P, tol: float = 1e-14, maxiter: int = 10 ** 5):
    """Unique positive pi with pi P = pi, sum(pi) = 1, for positive P.

    Solved by power iteration on the left action; stops when the relative
    change drops below ``tol``.  A direct linear solve is kept as a test
    oracle, not used here.
    """
    P = validate_stochastic_matrix(P)
    if (P <= 0).any():
        raise ValueError("stationary_vector requires strictly positive entries")
    d = P.shape[0]
    pi = np.full(d, 1.0 / d)
    for _ in range(maxiter):
        nxt = pi @ P
        nxt /= nxt.sum()
        if np.abs(nxt - pi).max() <= tol * np.abs(nxt).max():
            return nxt
        pi = nxt
    raise ArithmeticError("stationary vector iteration did not converge")


@dataclass(frozen=True)
class MarkovMeasure:
    """Shift-invariant Markov measure given by (P, pi) with pi P = pi."""

    P: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        P = validate_stochastic_matrix(self.P)
        pi = validate_probability_vector(self.pi)
        if np.abs(pi @ P - pi).max() > STATIONARY_TOL:
            raise ValueError("pi is not stationary for P (within 1e-10)")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "pi", pi)

    @property
    def d(self) -> int:
        return self.P.shape[0]

    @classmethod
    def from_stochastic(cls, P) -> "MarkovMeasure":
        P = validate_stochastic_matrix(P)
        return cls(P, stationary_vector(P))


def bernoulli_measure(p) -> MarkovMeasure:
    """Product measure with one-symbol marginals p (equal rows as Markov)."""
    p = validate_probability_vector(p)
    if (p <= 0).any():
        raise ValueError("bernoulli marginals must be positive")
    P = np.tile(p, (len(p), 1))
    return MarkovMeasure(P, p.copy())


def markov_cylinder_mass(m: MarkovMeasure, w) -> float:
    """pi[w0] * prod P(w_j, w_{j+1}); the empty word has mass 1."""
    if len(w) == 0:
        return 1.0
    validate_word(w, m.d)
    mass = m.pi[w[0] - 1]
    for a, b in zip(w[:-1], w[1:]):
        mass *= m.P[a - 1, b - 1]
    return float(mass)


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    nz = x > 0
    out[nz] = x[nz] * np.log(x[nz])
    return out


def markov_entropy(m: MarkovMeasure) -> float:
    """Kolmogorov entropy -sum_ij pi_i P(i,j) log P(i,j), with 0 log 0 = 0."""
    return float(-(m.pi[:, None] * _xlogx(m.P)).sum())


def kl_divergence(q, p) -> float:
    """sum q_i log(q_i / p_i) >= 0, zero exactly when q = p.

    Requires supp(q) within supp(p); a positive q_i over p_i = 0 is a
    domain error.
    """
    q = validate_probability_vector(q)
    p = validate_probability_vector(p)
    if q.shape != p.shape:
        raise ValueError("length mismatch")
    bad = (p == 0) & (q > 0)
    if bad.any():
        raise ValueError("q is not absolutely continuous w.r.t. p")
    nz = q > 0
    return float(np.sum(q[nz] * (np.log(q[nz]) - np.log(p[nz]))))


@dataclass(frozen=True)
class PeriodicOrbitMeasure:
    """Uniform measure on the n points of a periodic orbit."""

    orbit: PeriodicOrbit

    @property
    def d(self) -> int:
        return max(self.orbit.generator)


def periodic_cylinder_mass(m: PeriodicOrbitMeasure, w) -> float:
    """Fraction of the orbit points whose expansion begins with ``w``."""
    gen = m.orbit.generator
    n = len(gen)
    hits = 0
    for r in range(n):
        if all(gen[(r + j) % n] == w[j] for j in range(len(w))):
            hits += 1
    return hits / n


def integrate_potential(A, m) -> float:
    """Exact integral of a two-coordinate potential A(i, j) against m.

    For a Markov measure this is sum_ij pi_i P(i,j) A(i,j); for a periodic
    orbit it is the cycle mean of A along the orbit.
    """
    A = np.asarray(A, dtype=float)
    if isinstance(m, MarkovMeasure):
        if A.shape != m.P.shape:
            raise ValueError("dimension mismatch")
        return float((m.pi[:, None] * m.P * A).sum())
    if isinstance(m, PeriodicOrbitMeasure):
        gen = m.orbit.generator
        n = len(gen)
        return float(sum(A[gen[k] - 1, gen[(k + 1) % n] - 1]
                         for k in range(n)) / n)
    raise TypeError(f"unsupported measure type {type(m)!r}")


def sample_markov_path(m: MarkovMeasure, n: int, rng) -> np.ndarray:
    """n+1 symbols of a stationary trajectory, seeded RNG state passed in."""
    d = m.d
    path = np.empty(n + 1, dtype=int)
    path[0] = rng.choice(d, p=m.pi) + 1
    for k in range(n):
        path[k + 1] = rng.choice(d, p=m.P[path[k] - 1]) + 1
    return path


def birkhoff_average(A, m: MarkovMeasure, n: int, seed: int = 0) -> float:
    """Empirical mean of A along one sampled trajectory of length n.

    Test utility for the ergodic theorem; the RNG is seeded explicitly so
    runs are reproducible.
    """
    if n < 1:
        raise ValueError("need at least one step")
    A = np.asarray(A, dtype=float)
    rng = np.random.default_rng(seed)
    path = sample_markov_path(m, n, rng)
    return float(np.mean([A[path[k] - 1, path[k + 1] - 1] for k in range(n)]))


# --- serialization ---

def measure_to_json(m: MarkovMeasure) -> dict:
    return {"P": [[float(x) for x in row] for row in m.P],
            "pi": [float(x) for x in m.pi]}


def measure_from_json(data) -> MarkovMeasure:
    return MarkovMeasure(np.asarray(data["P"], dtype=float),
                         np.asarray(data["pi"], dtype=float))
