"""Transfer-operator computations for potentials depending on two coordinates.

For A(i, j) the transfer operator acts as the positive matrix
M_ij = exp(beta A(i, j)).  Its Perron data (lambda, right vector r, left
vector l) determine everything of thermodynamic interest:

  pressure          P(beta) = log lambda
  conformal masses  nu([j]) = r_j           (sum r = 1)
  eigenfunction     H(i)    = l_i           (sum l r = 1)
  equilibrium state the Markov measure of P_A(i,j) = e^{beta A(i,j)} r_j /
                    (lambda r_i), with stationary vector pi_i = l_i r_i.

Everything is computed in the log domain.  Entries of M span e^{beta (max A
- min A)}, and worse, the gap between the top two eigenvalues shrinks like
e^{-beta rho} for beta -> inf, so beyond a modest exponent range double
precision cannot even represent the quantities that matter (P(beta) itself
decays exponentially when m(A) = 0).  Two backends share one contract:

  * a float64 power iteration for well-conditioned inputs, verified by its
    eigen residuals;
  * an mpmath backend (QR eigenvalues + inverse iteration, working precision
    scaled to the exponent range) used when the range is large or the float
    path fails its residual check.  A certified bisection on the resolvent
    (xI - M is an M-matrix iff x > lambda) backs up the QR values.

Either way the returned logs are ordinary floats: log lambda, log r, log l
are all moderate numbers even when lambda - 1 ~ 1e-130.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf
from mpmath import eig as mp_eig_qr
from mpmath import matrix as mp_matrix

from .measures import MarkovMeasure, integrate_potential, markov_entropy

LOG10E = 0.4342944819032518
# beyond this log-range the float64 path is not attempted
FLOAT_RANGE_MAX = 35.0
RESIDUAL_TOL = 1e-11


def validate_potential(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("potential must be a square matrix")
    if not np.isfinite(A).all():
        raise ValueError("potential entries must be finite")
    return A


# ---------------------------------------------------------------------------
# float64 backend


def _power_iteration(M: np.ndarray, tol: float = 1e-14,
                     maxiter: int = 10 ** 5):
    """Perron pair of a positive matrix by power iteration.

    Deterministic all-ones start.  The eigenvalue estimate and the stopping
    test both come from the Collatz-Wielandt ratios (M v)_i / v_i, whose
    min/max certifiably bracket lambda for a positive matrix; iteration
    stops when the bracket is relatively tighter than ``tol``.
    Returns (lam, v, certified_gap).
    """
    d = M.shape[0]
    v = np.full(d, 1.0 / d)
    lam = float(M.sum()) / d
    gap = np.inf
    for _ in range(maxiter):
        w = M @ v
        ratios = w / v
        lo, hi = float(ratios.min()), float(ratios.max())
        lam = 0.5 * (lo + hi)
        gap = (hi - lo) / lam
        v = w / w.sum()
        if gap <= tol:
            break
    return lam, v, gap


@dataclass(frozen=True)
class PerronLog:
    """Log-domain Perron data of a positive matrix.

    ``log_lambda_minus_one`` is log(lambda - 1) when lambda > 1, else None;
    it is carried explicitly because log(lambda) itself underflows to 0.0
    once lambda - 1 drops below the smallest subnormal, while its log is a
    perfectly ordinary float (the zero-temperature decay diagnostics live
    at exactly that scale).
    """

    log_lambda: float
    log_r: np.ndarray
    log_l: np.ndarray
    log_lambda_minus_one: float | None


def _log_expm1_float(x: float) -> float:
    if x > 40.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def _perron_float(L: np.ndarray):
    """Float64 path; returns None when the residual check fails."""
    s = float(L.max())
    M = np.exp(L - s)
    lam_r, r, gap_r = _power_iteration(M)
    lam_l, l, gap_l = _power_iteration(M.T)
    lam = 0.5 * (lam_r + lam_l)
    res_r = np.abs(M @ r - lam * r).max() / (lam * np.abs(r).max())
    res_l = np.abs(M.T @ l - lam * l).max() / (lam * np.abs(l).max())
    if not (res_r < RESIDUAL_TOL and res_l < RESIDUAL_TOL):
        return None
    if (r <= 0).any() or (l <= 0).any():
        return None
    r = r / r.sum()
    l = l / (l @ r)
    log_lambda = s + float(np.log(lam))
    lm1 = _log_expm1_float(log_lambda) if log_lambda > 0 else None
    return PerronLog(log_lambda, np.log(r), np.log(l), lm1)


# ---------------------------------------------------------------------------
# mpmath backend


def _mp_dps_for_range(rng: float, d: int) -> int:
    return max(60, int(2.2 * rng * LOG10E) + 20 * d + 60)


def _mp_perron_root_bisect(M, d: int):
    """Certified Perron root: x > lambda iff (xI - M)^-1 e > 0 entrywise."""
    rowsums = [sum(M[i, j] for j in range(d)) for i in range(d)]
    hi = max(rowsums) * (1 + mpf(10) ** (-5))
    lo = max(min(rowsums), max(M[i, i] for i in range(d)))
    lo = lo * (1 - mpf(10) ** (-5))
    if lo <= 0:
        lo = mpf(10) ** (-2 * mp.dps)
    e = mp_matrix([mpf(1)] * d)
    target = mpf(10) ** (-(mp.dps - 10))
    while (hi - lo) > target * hi:
        x = (hi + lo) / 2
        S = mp_matrix(d, d)
        for i in range(d):
            for j in range(d):
                S[i, j] = (x if i == j else 0) - M[i, j]
        try:
            z = mp.lu_solve(S, e)
            above = all(zz > 0 for zz in z)
        except Exception:
            above = False
        if above:
            hi = x
        else:
            lo = x
    return (hi + lo) / 2


def _mp_inverse_iteration(M, lam, d: int):
    delta = lam * mpf(10) ** (-(2 * mp.dps) // 3)
    S = mp_matrix(d, d)
    for i in range(d):
        for j in range(d):
            S[i, j] = M[i, j] - ((lam + delta) if i == j else 0)
    x = mp_matrix([mpf(1)] * d)
    for _ in range(2):
        x = mp.lu_solve(S, x)
        x = x / max(abs(e) for e in x)
    if sum(x) < 0:
        x = -x
    return x

def _mp_residual(M, lam, v, d: int):
    return max(abs(sum(M[i, j] * v[j] for j in range(d)) - lam * v[i])
               / (lam * abs(v[i])) for i in range(d))


def _perron_mp(L: np.ndarray):
    d = L.shape[0]
    rng = float(L.max() - L.min())
    dps = _mp_dps_for_range(rng, d)
    for attempt in range(3):
        with mp.workdps(dps):
            s = mpf(float(L.max()))
            M = mp_matrix(d, d)
            for i in range(d):
                for j in range(d):
                    M[i, j] = mp.e ** (mpf(float(L[i, j])) - s)
            try:
                ev = mp_eig_qr(M, left=False, right=False)
                lam = max(e.real for e in ev)
            except Exception:
                lam = _mp_perron_root_bisect(M, d)
            r = _mp_inverse_iteration(M, lam, d)
            l = _mp_inverse_iteration(M.T, lam, d)
            ok = (all(e > 0 for e in r) and all(e > 0 for e in l))
            if ok:
                tol = mpf(10) ** (-mp.dps // 3)
                ok = (_mp_residual(M, lam, r, d) < tol
                      and _mp_residual(M.T, lam, l, d) < tol)
            if not ok:
                # QR value may have been off; try the certified root once,
                # then escalate precision
                lam = _mp_perron_root_bisect(M, d)
                r = _mp_inverse_iteration(M, lam, d)
                l = _mp_inverse_iteration(M.T, lam, d)
                tol = mpf(10) ** (-mp.dps // 3)
                ok = (all(e > 0 for e in r) and all(e > 0 for e in l)
                      and _mp_residual(M, lam, r, d) < tol
                      and _mp_residual(M.T, lam, l, d) < tol)
            if ok:
                sr = sum(r)
                r = r / sr
                slr = sum(l[i] * r[i] for i in range(d))
                l = l / slr
                log_lambda_mp = mp.log(lam) + s
                lm1 = None
                if log_lambda_mp > 0:
                    lm1 = float(mp.log(mp.expm1(log_lambda_mp)))
                log_r = np.array([float(mp.log(e)) for e in r])
                log_l = np.array([float(mp.log(e)) for e in l])
                return PerronLog(float(log_lambda_mp), log_r, log_l, lm1)
        dps = 2 * dps
    raise ArithmeticError("high-precision Perron solve failed to verify")


def perron_log(L) -> "PerronLog":
    """Log-domain Perron data of M = exp(L) entrywise.

    Normalization: sum r = 1, sum l_i r_i = 1.  Chooses the float64 path
    when the exponent range of L allows it and its residuals verify, the
    mpmath path otherwise.
    """
    L = np.asarray(L, dtype=float)
    if not np.isfinite(L).all():
        raise ValueError("log-matrix entries must be finite")
    if float(L.max() - L.min()) <= FLOAT_RANGE_MAX:
        out = _perron_float(L)
        if out is not None:
            return out
    return _perron_mp(L)


@dataclass(frozen=True)
class PerronData:
    """Linear-scale Perron triple of a positive matrix."""

    lam: float
    r: np.ndarray
    l: np.ndarray


def perron_eigendata(M) -> PerronData:
    """lambda > 0 simple dominant, r and l > 0, sum r = 1, sum l r = 1."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("square matrix required")
    if (M <= 0).any():
        raise ValueError("perron_eigendata requires strictly positive entries")
    data = perron_log(np.log(M))
    return PerronData(float(np.exp(data.log_lambda)), np.exp(data.log_r),
                      np.exp(data.log_l))


# ---------------------------------------------------------------------------
# thermodynamic state


@dataclass(frozen=True)
class ThermoState:
    """Per-beta Perron data of the transfer matrix e^{beta A}.

    pressure = log lambda; P is the stochasticization (equilibrium Markov
    kernel), pi its stationary vector, pi_i = l_i r_i.  log_P keeps the
    kernel in the log domain so deep cylinders stay computable at large
    beta.
    """

    beta: float
    A: np.ndarray
    log_lambda: float
    log_r: np.ndarray
    log_l: np.ndarray
    log_P: np.ndarray
    P: np.ndarray
    pi: np.ndarray
    log_lambda_minus_one: float | None = None

    @property
    def pressure(self) -> float:
        return self.log_lambda

    def markov_measure(self) -> MarkovMeasure:
        return MarkovMeasure(self.P, self.pi)


def thermo_state(A, beta: float) -> ThermoState:
    """Equilibrium data for the potential beta * A."""
    A = validate_potential(A)
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    data = perron_log(beta * A)
    log_lambda, log_r, log_l = data.log_lambda, data.log_r, data.log_l
    log_P = beta * A + log_r[None, :] - log_lambda - log_r[:, None]
    P = np.exp(log_P)
    P /= P.sum(axis=1, keepdims=True)
    pi = np.exp(log_l + log_r)
    pi /= pi.sum()
    return ThermoState(beta=float(beta), A=A, log_lambda=float(log_lambda),
                       log_r=log_r, log_l=log_l, log_P=log_P, P=P, pi=pi,
                       log_lambda_minus_one=data.log_lambda_minus_one)


def pressure(A, beta: float) -> float:
    """P(beta) = log of the Perron eigenvalue of e^{beta A}."""
    A = validate_potential(A)
    return float(perron_log(beta * A).log_lambda)


def log_gibbs_cylinder_mass(state: ThermoState, w) -> float:
    """log mu([w]) = log l_{w0} + beta * (interior Birkhoff sum)
    - (|w| - 1) log lambda + log r_{w_last}.

    The Birkhoff sum over a word of length n has n - 1 terms, one per
    transition inside the word; the matching power of lambda is n - 1.
    """
    if len(w) == 0:
        raise ValueError("gibbs mass needs a word of length >= 1")
    n = len(w)
    sn = sum(state.A[w[k] - 1, w[k + 1] - 1] for k in range(n - 1))
    return float(state.log_l[w[0] - 1] + state.beta * sn
                 - (n - 1) * state.log_lambda + state.log_r[w[-1] - 1])


def gibbs_cylinder_mass(state: ThermoState, A, w) -> float:
    """Cylinder mass of the equilibrium state, from the Gibbs formula.

    Agrees with the Markov product over (pi, P_A) up to rounding; ``A`` is
    accepted for signature symmetry and must match state.A.
    """
    A = validate_potential(A)
    if A.shape != state.A.shape or not np.allclose(A, state.A):
        raise ValueError("potential does not match the state")
    return float(np.exp(log_gibbs_cylinder_mass(state, w)))


def free_energy(m: MarkovMeasure, A, beta: float) -> float:
    """h(mu) + beta * integral A dmu; <= pressure(beta A), equality exactly
    at the equilibrium state."""
    A = validate_potential(A)
    return markov_entropy(m) + beta * integrate_potential(A, m)


def pressure_derivative_check(A, beta: float, h: float):
    """Central difference of the pressure vs the exact derivative.

    dP/dbeta = integral A d mu_beta; returns (finite_difference, exact).
    """
    if h <= 0:
        raise ValueError("step must be positive")
    A = validate_potential(A)
    fd = (pressure(A, beta + h) - pressure(A, beta - h)) / (2 * h)
    st = thermo_state(A, beta)
    exact = integrate_potential(A, st.markov_measure())
    return float(fd), float(exact)


def gibbs_bounds_constant(state: ThermoState) -> float:
    """C with e^-C <= mu([w]) / e^{S(A) - n log lambda} <= e^C for all words.

    For two-coordinate potentials the prefactor is exactly l_{w0} r_{w_last},
    so C = max_{i,j} |log l_i + log r_j|.  Grows linearly in beta as the
    Gibbs constant blows up at zero temperature.
    """
    combo = state.log_l[:, None] + state.log_r[None, :]
    return float(np.abs(combo).max())


# --- serialization ---

def state_to_json(state: ThermoState) -> dict:
    return {
        "beta": state.beta,
        "d": int(state.A.shape[0]),
        "log_lambda": state.log_lambda,
        "pressure": state.pressure,
        "log_r": [float(x) for x in state.log_r],
        "log_l": [float(x) for x in state.log_l],
        "P": [[float(x) for x in row] for row in state.P],
        "pi": [float(x) for x in state.pi],
    }


def potential_to_json(A) -> dict:
    A = validate_potential(A)
    return {"d": int(A.shape[0]), "A": [[float(x) for x in row] for row in A]}


def potential_from_json(data) -> np.ndarray:
    A = np.asarray(data["A"], dtype=float)
    if "d" in data and int(data["d"]) != A.shape[0]:
        raise ValueError("declared dimension does not match matrix")
    return validate_potential(A)
