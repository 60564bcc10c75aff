"""Zero-temperature limits: beta sweeps and the 3-symbol worked analysis.

As beta -> inf the pressure P(beta) of beta*A decreases to its asymptote
h_max + beta m(A), the equilibrium masses mu_beta([i]) concentrate on the
Aubry set, and (1/beta) log of the eigenfunction converges to a calibrated
subaction.  ``beta_sweep`` tabulates all of that with convergence
diagnostics.

The closed-form machinery reproduces the fully worked three-symbol family
A(i, j) = -eps_ij with eps_11 = eps_22 = 0 and every other eps_ij > 0: the
two fixed points 1^inf and 2^inf are the only ergodic maximizing measures,
P(beta) -> 0 like g(beta) e^{-rho beta} with g subexponential and rho
determined by a 2x2 max-plus eigenvalue, and the ratio
mu_beta([1]) / mu_beta([2]) factors into four two-term expressions whose
dominating exponents decide the selected limit

    alpha/(alpha+1) delta_1 + 1/(alpha+1) delta_2,   alpha = lim ratio.

All evaluations run in the log domain; e^{P} - 1 is always expm1(P), which
keeps full relative precision as P -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aubry import calibration_residual, max_ergodic_value
from .thermo import thermo_state, validate_potential

BETA_MAX_SAFE = 500.0


def log_expm1(x: float) -> float:
    """log(e^x - 1), stable for x tiny (-> log x) and x large (-> x)."""
    if x <= 0:
        raise ValueError("log_expm1 needs x > 0")
    if x > 40.0:
        return x + math.log1p(-math.exp(-x))
    return math.log(math.expm1(x))


def _resolve_log_em1(pressure: float | None, log_em1: float | None,
                     state=None) -> float:
    """log(e^P - 1) from whatever the caller has.

    P(beta) can underflow to 0.0 as a float while log(e^P - 1) is still an
    ordinary number (about -900 at beta rho = 900); the thermo state carries
    that value exactly for this situation.
    """
    if log_em1 is not None:
        return float(log_em1)
    if state is not None and state.log_lambda_minus_one is not None:
        return float(state.log_lambda_minus_one)
    if pressure is not None and pressure > 0:
        return log_expm1(pressure)
    raise ValueError(
        "pressure underflowed to zero; pass log_em1 = log(e^P - 1) "
        "(available as ThermoState.log_lambda_minus_one)")


def _logsumexp2(a: float, b: float) -> float:
    m = max(a, b)
    return m + math.log(math.exp(a - m) + math.exp(b - m))


def make_beta_schedule(beta_min: float = 1.0, beta_max: float = 300.0,
                       steps: int = 40, kind: str = "geometric") -> np.ndarray:
    """Strictly increasing positive schedule, capped at 500 for log-domain
    safety."""
    if not (0 < beta_min < beta_max):
        raise ValueError("need 0 < beta_min < beta_max")
    if beta_max > BETA_MAX_SAFE:
        raise ValueError(f"beta_max above the safety margin {BETA_MAX_SAFE}")
    if steps < 2:
        raise ValueError("need at least two steps")
    if kind == "geometric":
        sched = np.geomspace(beta_min, beta_max, steps)
    elif kind == "linear":
        sched = np.linspace(beta_min, beta_max, steps)
    else:
        raise ValueError(f"unknown schedule kind {kind!r}")
    return sched


def validate_schedule(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) == 0 or (values <= 0).any():
        raise ValueError("schedule must be positive")
    if (np.diff(values) <= 0).any():
        raise ValueError("schedule must be strictly increasing")
    if values[-1] > BETA_MAX_SAFE:
        raise ValueError(f"schedule exceeds the safety margin {BETA_MAX_SAFE}")
    return values


@dataclass(frozen=True)
class SweepPoint:
    beta: float
    pressure: float
    decay: float  # (1/beta) log(e^P - 1)
    mu_cyl: np.ndarray  # equilibrium one-cylinder masses
    logH_over_beta: np.ndarray  # (1/beta) log l, normalized max = 0
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    A: np.ndarray
    points: list
    diagnostics: dict


def beta_sweep(A, schedule) -> SweepResult:
    """Thermodynamic data along a beta schedule, plus convergence
    diagnostics.

    Diagnostics: the slopes of the pressure between consecutive points
    (converging to m(A)), the sup-distance between consecutive normalized
    (1/beta) log l vectors (a Cauchy check for subaction convergence), and
    the calibration residual of the final vector.  A Perron failure at a
    point is recorded in that row's error field instead of aborting.
    """
    A = validate_potential(A)
    schedule = validate_schedule(schedule)
    points = []
    for beta in schedule:
        try:
            st = thermo_state(A, float(beta))
            logh = st.log_l / beta
            logh = logh - logh.max()
            if st.log_lambda_minus_one is not None:
                decay = st.log_lambda_minus_one / beta
            else:
                decay = math.nan  # pressure <= 0: e^P - 1 has no log
            points.append(SweepPoint(float(beta), st.pressure, decay,
                                     st.pi.copy(), logh))
        except (ArithmeticError, ValueError) as exc:  # pragma: no cover
            points.append(SweepPoint(float(beta), math.nan, math.nan,
                                     np.full(A.shape[0], math.nan),
                                     np.full(A.shape[0], math.nan),
                                     error=str(exc)))
    good = [p for p in points if p.error is None]
    slopes = [(q.pressure - p.pressure) / (q.beta - p.beta)
              for p, q in zip(good[:-1], good[1:])]
    cauchy = [float(np.abs(q.logH_over_beta - p.logH_over_beta).max())
              for p, q in zip(good[:-1], good[1:])]
    diag = {"pressure_slopes": slopes, "logH_cauchy": cauchy}
    if good:
        m = max_ergodic_value(A)
        diag["m_A"] = m
        diag["final_slope_gap"] = abs(slopes[-1] - m) if slopes else math.nan
        diag["final_calibration_residual"] = calibration_residual(
            A, good[-1].logH_over_beta, m)
    return SweepResult(A, points, diag)


def sweep_to_csv(result: SweepResult) -> str:
    """CSV with '.' decimals and 17 significant digits per value."""
    d = result.A.shape[0]
    cols = (["beta", "pressure", "decay"]
            + [f"mu_{i}" for i in range(1, d + 1)]
            + [f"logH_{i}" for i in range(1, d + 1)])
    lines = [",".join(cols)]
    for p in result.points:
        vals = [p.beta, p.pressure, p.decay, *p.mu_cyl, *p.logH_over_beta]
        lines.append(",".join("%.17g" % v for v in vals))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# two-symbol closed forms


@dataclass(frozen=True)
class TwoStateForms:
    beta: float
    lam: float
    log_lambda: float
    log_H_ratio: float  # log H_1 - log H_2
    mu: tuple  # ([1], [2]) masses
    V: tuple  # selected subaction, V(2) = 0


def two_state_closed_forms(A, beta: float) -> TwoStateForms:
    """Exact spectral data for a 2x2 potential with zero diagonal.

    lambda = 1 + e^{beta (A(1,2)+A(2,1))/2};  H_1/H_2 = e^{beta (A(2,1) -
    A(1,2))/2};  the one-cylinder masses are (1/2, 1/2) at every beta, and
    the selected subaction has V(1) - V(2) = (A(2,1) - A(1,2)) / 2.
    """
    A = validate_potential(A)
    if A.shape != (2, 2):
        raise ValueError("two-symbol potential required")
    if A[0, 0] != 0.0 or A[1, 1] != 0.0:
        raise ValueError("diagonal must be zero")
    if not (A[0, 1] < 0 and A[1, 0] < 0):
        raise ValueError("off-diagonal entries must be negative")
    half_sum = 0.5 * beta * (A[0, 1] + A[1, 0])
    lam = 1.0 + math.exp(half_sum)
    log_lambda = math.log1p(math.exp(half_sum))
    log_H_ratio = 0.5 * beta * (A[1, 0] - A[0, 1])
    V1 = 0.5 * (A[1, 0] - A[0, 1])
    return TwoStateForms(beta=float(beta), lam=lam, log_lambda=log_lambda,
                         log_H_ratio=log_H_ratio, mu=(0.5, 0.5),
                         V=(V1, 0.0))


# ---------------------------------------------------------------------------
# the three-symbol family A(i,j) = -eps_ij


@dataclass(frozen=True)
class Chapter7Params:
    """eps matrix with zero at (1,1) and (2,2) and positive costs elsewhere."""

    eps: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.eps, dtype=float)
        if eps.shape != (3, 3):
            raise ValueError("eps must be 3x3")
        if eps[0, 0] != 0.0 or eps[1, 1] != 0.0:
            raise ValueError("eps_11 and eps_22 must be zero")
        mask = np.ones((3, 3), dtype=bool)
        mask[0, 0] = mask[1, 1] = False
        if (eps[mask] <= 0).any():
            raise ValueError("all other eps entries must be positive")
        object.__setattr__(self, "eps", eps)

    @property
    def A(self) -> np.ndarray:
        return -self.eps

    def e(self, i: int, j: int) -> float:
        return float(self.eps[i - 1, j - 1])


def rho_chapter7(p: Chapter7Params):
    """Decay rate rho of the pressure: -rho is the max of six candidate
    path exponents (the max-plus eigenvalue of the reduced 2x2 system).

    Returns (rho, candidates, argmax_indices).
    """
    e = p.e
    candidates = [
        -e(1, 3) - e(3, 1),
        -e(3, 2) - e(2, 3),
        -(e(1, 2) + e(2, 1)) / 2.0,
        -(e(2, 1) + e(1, 3) + e(3, 2)) / 2.0,
        -(e(1, 2) + e(2, 3) + e(3, 1)) / 2.0,
        -(e(2, 3) + e(3, 1) + e(1, 3) + e(3, 2)) / 2.0,
    ]
    best = max(candidates)
    argmax = [k for k, c in enumerate(candidates) if c == best]
    return -best, candidates, argmax


def reduced_maxplus_matrix(p: Chapter7Params) -> np.ndarray:
    """The 2x2 max-plus matrix whose eigenvalue is -rho (symbol 3
    eliminated through the barrier)."""
    e = p.e
    return np.array([
        [-e(1, 3) - e(3, 1), max(-e(2, 1), -e(3, 1) - e(2, 3))],
        [max(-e(1, 2), -e(3, 2) - e(1, 3)), -e(2, 3) - e(3, 2)],
    ])


def _log_two_term(log_em1: float, beta: float, g_exp: float,
                  plain_exp: float) -> float:
    """log of (e^P - 1) e^{beta g_exp} + e^{beta plain_exp}."""
    return _logsumexp2(log_em1 + beta * g_exp, beta * plain_exp)


def nu_ratio_chapter7(p: Chapter7Params, beta: float, pressure: float,
                      log_em1: float | None = None) -> float:
    """nu_beta([1]) / nu_beta([2]) from the conformal linear system.

    nu is the right Perron vector; the ratio has the closed form
    ((e^P-1) e^{-b e13} + e^{-b (e12+e23)}) /
    ((e^P-1) e^{-b e23} + e^{-b (e21+e13)}).
    """
    e = p.e
    log_em1 = _resolve_log_em1(pressure, log_em1)
    num = _log_two_term(log_em1, beta, -e(1, 3), -(e(1, 2) + e(2, 3)))
    den = _log_two_term(log_em1, beta, -e(2, 3), -(e(2, 1) + e(1, 3)))
    return math.exp(num - den)


def h_ratio_chapter7(p: Chapter7Params, beta: float, pressure: float,
                     log_em1: float | None = None) -> float:
    """H_beta(1) / H_beta(2): same shape as the nu ratio with reversed
    cost orientation (H is the left Perron vector)."""
    e = p.e
    log_em1 = _resolve_log_em1(pressure, log_em1)
    num = _log_two_term(log_em1, beta, -e(3, 1), -(e(2, 1) + e(3, 2)))
    den = _log_two_term(log_em1, beta, -e(3, 2), -(e(1, 2) + e(3, 1)))
    return math.exp(num - den)


def log_mu_ratio_chapter7(p: Chapter7Params, beta: float,
                          pressure: float | None = None,
                          log_em1: float | None = None) -> float:
    """log of mu_beta([1]) / mu_beta([2]) = log(H ratio) + log(nu ratio)."""
    if pressure is None and log_em1 is None:
        log_em1 = _resolve_log_em1(None, None, thermo_state(p.A, beta))
    else:
        log_em1 = _resolve_log_em1(pressure, log_em1)
    e = p.e
    out = (_log_two_term(log_em1, beta, -e(1, 3), -(e(1, 2) + e(2, 3)))
           - _log_two_term(log_em1, beta, -e(2, 3), -(e(2, 1) + e(1, 3)))
           + _log_two_term(log_em1, beta, -e(3, 1), -(e(2, 1) + e(3, 2)))
           - _log_two_term(log_em1, beta, -e(3, 2), -(e(1, 2) + e(3, 1))))
    return out


def mu_ratio_chapter7(p: Chapter7Params, beta: float,
                      pressure: float | None = None,
                      log_em1: float | None = None) -> float:
    log_ratio = log_mu_ratio_chapter7(p, beta, pressure, log_em1)
    if log_ratio > 709.0:
        return math.inf
    if log_ratio < -745.0:
        return 0.0
    return math.exp(log_ratio)


def g_function_chapter7(p: Chapter7Params, beta: float,
                        rho: float | None = None,
                        pressure: float | None = None,
                        log_em1: float | None = None) -> float:
    """g(beta) = (e^{P(beta)} - 1) e^{rho beta}, the subexponential factor
    of the pressure decay; admits a limit as beta -> inf."""
    if rho is None:
        rho, _, _ = rho_chapter7(p)
    if pressure is None and log_em1 is None:
        log_em1 = _resolve_log_em1(None, None, thermo_state(p.A, beta))
    else:
        log_em1 = _resolve_log_em1(pressure, log_em1)
    return math.exp(log_em1 + rho * beta)


# ---------------------------------------------------------------------------
# limit selection


@dataclass(frozen=True)
class FactorAsymptotics:
    g_exponent: float
    plain_exponent: float

    @property
    def exponent(self) -> float:
        return max(self.g_exponent, self.plain_exponent)

    def prefactor(self, G: float, tie_tol: float = 1e-9) -> float:
        if abs(self.g_exponent - self.plain_exponent) <= tie_tol:
            return G + 1.0
        return G if self.g_exponent > self.plain_exponent else 1.0


@dataclass(frozen=True)
class Chapter7Analysis:
    rho: float
    candidates: list
    argmax: list
    g_limit: float | None
    asymptotic_class: str  # 'zero' | 'finite' | 'infinity' | 'unresolved'
    asymptotic_alpha: float | None
    asymptotic_exponent: float
    numeric_class: str
    numeric_alpha: float | None
    numeric_trace: list  # (beta, ratio)
    agree: bool
    status: str  # 'resolved' | 'unresolved'
    alpha: float | None  # final alpha (inf -> math.inf, zero -> 0.0)

    @property
    def selected(self):
        """Masses (on delta_{1^inf}, delta_{2^inf}) of the selected limit."""
        if self.status != "resolved" or self.alpha is None:
            return None
        if math.isinf(self.alpha):
            return (1.0, 0.0)
        a = self.alpha
        return (a / (a + 1.0), 1.0 / (a + 1.0))


def _mu_ratio_factors(p: Chapter7Params, rho: float):
    """The four two-term factors of the mu ratio after substituting
    e^P - 1 ~ g(beta) e^{-rho beta}; numerators first."""
    e = p.e
    s = e(1, 2) + e(2, 1)
    return [
        FactorAsymptotics(s - e(1, 3) - rho, e(2, 1) - e(2, 3)),   # num
        FactorAsymptotics(s - e(2, 3) - rho, e(1, 2) - e(1, 3)),   # den
        FactorAsymptotics(s - e(3, 1) - rho, e(1, 2) - e(3, 2)),   # num
        FactorAsymptotics(s - e(3, 2) - rho, e(2, 1) - e(3, 1)),   # den
    ]


def limit_selection_chapter7(p: Chapter7Params,
                             betas=(150.0, 200.0, 300.0),
                             ratio_low: float = 1e-4,
                             ratio_high: float = 1e4,
                             exp_tol: float = 1e-9) -> Chapter7Analysis:
    """Classify lim mu_beta([1]) / mu_beta([2]) in {0, alpha, +inf}.

    Two routes are run and compared.  (a) Asymptotic: each factor of the
    closed ratio is dominated by the larger of its two exponents (the
    g-term counted at -rho); the total exponent decides 0 / inf, and on
    exact balance the prefactors (g-limit G, or G + 1 on a within-factor
    tie) produce the finite alpha.  (b) Numeric: the ratio is evaluated on
    ``betas`` and thresholded.  Disagreement yields status 'unresolved'
    with both diagnostics; when deciding exponents tie the numeric value is
    authoritative for alpha.
    """
    betas = validate_schedule(betas)
    rho, candidates, argmax = rho_chapter7(p)
    factors = _mu_ratio_factors(p, rho)

    # numeric route (also provides the g-limit estimate)
    trace = []
    lm1_last = None
    for beta in betas:
        st = thermo_state(p.A, float(beta))
        lm1_last = st.log_lambda_minus_one
        trace.append((float(beta),
                      mu_ratio_chapter7(p, float(beta),
                                        log_em1=st.log_lambda_minus_one)))
    g_limit = g_function_chapter7(p, float(betas[-1]), rho=rho,
                                  log_em1=lm1_last)
    last = trace[-1][1]
    if last < ratio_low:
        numeric_class, numeric_alpha = "zero", 0.0
    elif last > ratio_high:
        numeric_class, numeric_alpha = "infinity", math.inf
    else:
        numeric_class, numeric_alpha = "finite", float(last)

    # asymptotic route
    exponent = (factors[0].exponent + factors[2].exponent
                - factors[1].exponent - factors[3].exponent)
    needs_g = any(f.g_exponent >= f.plain_exponent - exp_tol for f in factors)
    if exponent > exp_tol:
        asym_class, asym_alpha = "infinity", math.inf
    elif exponent < -exp_tol:
        asym_class, asym_alpha = "zero", 0.0
    elif needs_g and g_limit < 1e-8:
        # a vanishing g-limit invalidates the nominal g-term exponent
        asym_class, asym_alpha = "unresolved", None
    else:
        num = factors[0].prefactor(g_limit) * factors[2].prefactor(g_limit)
        den = factors[1].prefactor(g_limit) * factors[3].prefactor(g_limit)
        asym_class, asym_alpha = "finite", num / den

    agree = (asym_class == numeric_class)
    status = "resolved" if (agree or asym_class == "unresolved") else \
        "unresolved"
    if status == "resolved":
        alpha = numeric_alpha  # numeric is authoritative for the value
    else:
        alpha = None
    return Chapter7Analysis(rho=rho, candidates=candidates, argmax=argmax,
                            g_limit=g_limit, asymptotic_class=asym_class,
                            asymptotic_alpha=asym_alpha,
                            asymptotic_exponent=float(exponent),
                            numeric_class=numeric_class,
                            numeric_alpha=numeric_alpha,
                            numeric_trace=trace, agree=agree, status=status,
                            alpha=alpha)


def analysis_to_json(a: Chapter7Analysis) -> dict:
    def num(x):
        if x is None:
            return None
        if math.isinf(x):
            return "inf"
        return float(x)

    return {
        "rho": a.rho,
        "candidates": [float(c) for c in a.candidates],
        "argmax": a.argmax,
        "g_limit": num(a.g_limit),
        "classification": {
            "asymptotic": a.asymptotic_class,
            "numeric": a.numeric_class,
            "agree": a.agree,
            "status": a.status,
        },
        "alpha": num(a.alpha),
        "selected": list(a.selected) if a.selected is not None else None,
        "numeric_trace": [[b, num(r)] for b, r in a.numeric_trace],
    }
