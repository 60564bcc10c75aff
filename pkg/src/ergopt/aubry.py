"""Ergodic optimization for two-coordinate potentials.

The maximal ergodic average m(A) over invariant measures is attained on
periodic orbits, and among those it is enough to look at *simple* cycles
(pairwise-distinct symbols).  Everything downstream is graph combinatorics
on the weighted digraph with edge weights A(i, j):

  * a calibrated subaction V solves  m(A) + V(j) = max_i (A(i, j) + V(i)),
    i.e. V is a max-plus eigenvector of the transpose of A at eigenvalue
    m(A);
  * the Peierls barrier h(i, j) is the best total of A - m(A) over finite
    paths i -> j (all cycles weigh <= 0, so longest paths are well posed);
  * the Aubry set is the subshift built from the maximizing simple cycles
    ("bricks"), and carries the supports of all maximizing measures;
  * ground states concentrate on the Aubry component(s) of maximal entropy;
  * the large-deviation rate of mu_beta on a cylinder is a sum of the
    nonnegative calibration deficiencies c(i, j) = V(j) - V(i) - A(i, j)
    + m(A) plus a cheapest continuation into the Aubry graph.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from . import maxplus
from .measures import MarkovMeasure
from .shifts import (cycle_rotations, enumerate_simple_cycles,
                     irreducible_components, validate_word)
from .thermo import validate_potential

MAXIMIZING_TOL = 1e-9


def cycle_mean(A, cycle) -> float:
    n = len(cycle)
    return float(sum(A[cycle[k] - 1, cycle[(k + 1) % n] - 1]
                     for k in range(n)) / n)


def max_ergodic_value(A) -> float:
    """m(A): the best mean of A over simple cycles.

    Direct enumeration; independent of the max-plus eigenvalue route, which
    must agree with it (both equal the maximum cycle mean).
    """
    A = validate_potential(A)
    d = A.shape[0]
    return max(cycle_mean(A, c) for c in enumerate_simple_cycles(d))


def calibrated_subaction(A) -> np.ndarray:
    """A calibrated subaction V, normalized so max V = 0.

    V solves the max-plus eigenproblem of A^T at eigenvalue m(A) (obtained
    here as the maximum cycle mean, the cheap route to the same value).
    When the eigenvector is not unique (several Aubry components) the
    Kleene-star column at the lowest-index critical node is returned, a
    deterministic representative; ``subaction_from_aubry`` exposes the full
    family.
    """
    A = validate_potential(A)
    m = maxplus.max_cycle_mean(A)
    V, _ = maxplus.eigenvector_from_kleene(A.T, m, tol=MAXIMIZING_TOL)
    return V - V.max()


def calibration_residual(A, V, m: float | None = None) -> float:
    """max_j |max_i (A(i,j) + V(i)) - m(A) - V(j)|; 0 iff V is calibrated."""
    A = validate_potential(A)
    V = np.asarray(V, dtype=float)
    if m is None:
        m = maxplus.max_cycle_mean(A)
    lhs = np.max(A + V[:, None], axis=0)
    return float(np.abs(lhs - m - V).max())


def deficiency_matrix(A, V, m: float | None = None) -> np.ndarray:
    """g(i, j) = A(i, j) - m(A) + V(i) - V(j), nonpositive for calibrated V.

    For each column j the maximum over i is 0: the calibration max is
    attained.  The rate-function increments are c = -g.
    """
    A = validate_potential(A)
    V = np.asarray(V, dtype=float)
    if m is None:
        m = maxplus.max_cycle_mean(A)
    return A - m + V[:, None] - V[None, :]


def peierls_barrier_matrix(A, V=None) -> np.ndarray:
    """All-pairs Peierls barrier h(i, j) for a two-coordinate potential.

    h(i, j) is the supremum of sums of A - m(A) over finite paths i -> j of
    length >= 1.  With a calibrated V the edge weights g = A - m + V(i) -
    V(j) are nonpositive and path sums telescope, h = (longest g-path) +
    V(j) - V(i); Bellman-Ford relaxation for d(d+1) rounds is enough since
    no cycle has positive weight.
    """
    A = validate_potential(A)
    d = A.shape[0]
    m = maxplus.max_cycle_mean(A)
    if V is None:
        V = calibrated_subaction(A)
    V = np.asarray(V, dtype=float)
    g = deficiency_matrix(A, V, m)
    # best[i, j]: max total g over paths i -> j with >= 1 edge so far
    best = g.copy()
    for _ in range(d * (d + 1) - 1):
        relaxed = np.max(best[:, :, None] + g[None, :, :], axis=1)
        nxt = np.maximum(best, relaxed)
        if np.array_equal(nxt, best):
            break
        best = nxt
    return best + V[None, :] - V[:, None]


def peierls_barrier(A, V, i: int, j: int) -> float:
    """h(i, j) <= 0 for a single pair of symbols (1-based)."""
    A = validate_potential(A)
    validate_word((i, j), A.shape[0])
    return float(peierls_barrier_matrix(A, V)[i - 1, j - 1])


@dataclass(frozen=True)
class AubryComponent:
    symbols: tuple
    entropy: float


@dataclass(frozen=True)
class AubryData:
    """Maximizing cycles, bricks, and the Aubry subshift of finite type."""

    m_A: float
    maximizing_cycles: list
    bricks: list
    T_aubry: np.ndarray
    components: list

    @property
    def symbols(self) -> tuple:
        return tuple(sorted({s for c in self.maximizing_cycles for s in c}))


def component_entropy(T_comp) -> float:
    """log spectral radius of an irreducible 0/1 matrix.

    Power iteration runs on T + I: adding the identity makes an irreducible
    matrix primitive (periodic components would otherwise make the plain
    iteration oscillate) and shifts the Perron root by exactly 1.
    """
    T = np.asarray(T_comp, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("square matrix required")
    classes, transient = irreducible_components(T.astype(int))
    if transient or len(classes) != 1 or len(classes[0]) != T.shape[0]:
        raise ValueError("component_entropy requires an irreducible matrix")
    lam, _, _ = _nonneg_perron(T)
    return float(np.log(lam)) if lam > 1.0 else 0.0


def aubry_set(A, tol: float = MAXIMIZING_TOL) -> AubryData:
    """Maximizing simple cycles, their bricks, and the Aubry SFT.

    An edge ij enters the Aubry transition matrix iff it lies on some
    maximizing simple cycle (a diagonal entry iff the fixed point i is
    itself maximizing).  Components are the irreducible classes of that
    matrix, each with the entropy of its restricted subshift.
    """
    A = validate_potential(A)
    d = A.shape[0]
    m = maxplus.max_cycle_mean(A)
    scale = max(1.0, abs(m))
    # every edge of a maximizing cycle has zero calibration deficiency, so
    # it is enough to enumerate cycles of the (usually sparse) zero-edge
    # graph instead of all simple cycles of the complete graph
    V, _ = maxplus.eigenvector_from_kleene(A.T, m, tol=tol)
    g = deficiency_matrix(A, V, m)
    T_zero = (g >= -d * tol * scale).astype(int)
    cycles = enumerate_simple_cycles(d, T_zero)
    maximizing = [c for c in cycles if m - cycle_mean(A, c) <= tol * scale]
    bricks = [rot for c in maximizing for rot in cycle_rotations(c)]
    T = np.zeros((d, d), dtype=int)
    for c in maximizing:
        n = len(c)
        for k in range(n):
            T[c[k] - 1, c[(k + 1) % n] - 1] = 1
    classes, _ = irreducible_components(T)
    comps = []
    for cls in classes:
        idx = np.array([s - 1 for s in cls])
        comps.append(AubryComponent(tuple(cls),
                                    component_entropy(T[np.ix_(idx, idx)])))
    return AubryData(m_A=float(m), maximizing_cycles=maximizing,
                     bricks=bricks, T_aubry=T, components=comps)


@dataclass(frozen=True)
class GroundState:
    """Entropy selection among Aubry components.

    When a single component has strictly maximal entropy the ground state
    is its measure of maximal entropy (a Markov measure built from the
    Perron data of the 0/1 matrix).  Entropy ties are reported as such; the
    finer isolation-rate selection is out of scope here.
    """

    aubry: AubryData
    selected: list
    tie: bool
    entropy: float
    measure: MarkovMeasure | None


def _nonneg_perron(T: np.ndarray):
    """(lam, r, l) of an irreducible nonnegative matrix.

    Power iteration on T + I, which is primitive, so the iteration cannot
    oscillate between the phases of a periodic matrix; the identity shifts
    the Perron root by exactly 1 and keeps the eigenvectors.
    """
    d = T.shape[0]
    M = T + np.eye(d)

    def iterate(B):
        v = np.full(d, 1.0 / d)
        lam = float(d)
        for _ in range(10 ** 5):
            w = B @ v
            ratios = w / v
            lo, hi = float(ratios.min()), float(ratios.max())
            lam = 0.5 * (lo + hi)
            v = w / w.sum()
            if hi - lo <= 1e-14 * lam:
                break
        return lam, v

    lam_r, r = iterate(M)
    lam_l, l = iterate(M.T)
    return 0.5 * (lam_r + lam_l) - 1.0, r, l


def _parry_measure(T_comp: np.ndarray, symbols, d: int) -> MarkovMeasure:
    """Measure of maximal entropy of an irreducible SFT, embedded on the
    full alphabet (identity rows off the component are never visited since
    pi vanishes there)."""
    lam, r, l = _nonneg_perron(np.asarray(T_comp, dtype=float))
    P_sub = T_comp * r[None, :] / (lam * r[:, None])
    P_sub /= P_sub.sum(axis=1, keepdims=True)
    pi_sub = l * r
    pi_sub /= pi_sub.sum()
    P = np.eye(d)
    pi = np.zeros(d)
    idx = [s - 1 for s in symbols]
    for a, ia in enumerate(idx):
        pi[ia] = pi_sub[a]
        P[ia, :] = 0.0
        for b, ib in enumerate(idx):
            P[ia, ib] = P_sub[a, b]
    return MarkovMeasure(P, pi)


def ground_state(A, tol: float = MAXIMIZING_TOL) -> GroundState:
    """Identify the Aubry component(s) of maximal entropy.

    Unique maximum: returns its measure of maximal entropy.  Tie within
    ``tol``: returns the tie set and no measure (the entropy criterion
    alone cannot select).
    """
    A = validate_potential(A)
    data = aubry_set(A, tol)
    h = max(c.entropy for c in data.components)
    top = [c for c in data.components if h - c.entropy <= tol]
    if len(top) > 1:
        return GroundState(data, top, True, float(h), None)
    comp = top[0]
    idx = np.array([s - 1 for s in comp.symbols])
    mme = _parry_measure(data.T_aubry[np.ix_(idx, idx)], comp.symbols,
                         A.shape[0])
    return GroundState(data, top, False, float(h), mme)


@dataclass(frozen=True)
class RateValue:
    """Large-deviation rate of a cylinder, with a uniqueness flag.

    The defining theorem assumes a unique maximizing measure; when the
    Aubry set carries several, the same formula is still computed and
    ``unique_maximizer`` is False rather than guessing an intent the source
    material leaves open.
    """

    value: float
    interior: float
    tail: float
    unique_maximizer: bool


def _tail_costs(c: np.ndarray, aubry_symbols) -> np.ndarray:
    """Cheapest c-path cost from every symbol into the Aubry symbol set.

    Dijkstra with the nonnegative weights c; inside the Aubry graph the
    increments are exactly zero, so targets cost 0.
    """
    d = c.shape[0]
    dist = np.full(d, np.inf)
    heap = []
    for s in aubry_symbols:
        dist[s - 1] = 0.0
        heapq.heappush(heap, (0.0, s - 1))
    # edges are walked backwards: dist[u] = min over v of c[u, v] + dist[v]
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for v in range(d):
            nd = c[v, u] + du
            if nd < dist[v] - 1e-18:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def rate_function_cylinder(A, V, w) -> RateValue:
    """inf over x in [w] of I(x) = sum_j c(x_j, x_{j+1}).

    Increments c(i, j) = V(j) - V(i) - A(i, j) + m(A) >= 0 are clipped at
    zero against rounding.  The infimum is the sum over the word's interior
    transitions plus the cheapest continuation from the last symbol into
    the Aubry set, where the increments vanish forever after.
    """
    A = validate_potential(A)
    validate_word(w, A.shape[0])
    if len(w) == 0:
        raise ValueError("rate needs a word of length >= 1")
    V = np.asarray(V, dtype=float)
    m = maxplus.max_cycle_mean(A)
    c = np.maximum(-deficiency_matrix(A, V, m), 0.0)
    data = aubry_set(A)
    interior = float(sum(c[w[k] - 1, w[k + 1] - 1] for k in range(len(w) - 1)))
    tails = _tail_costs(c, data.symbols)
    tail = float(tails[w[-1] - 1])
    return RateValue(value=interior + tail, interior=interior, tail=tail,
                     unique_maximizer=(len(data.maximizing_cycles) == 1))


def subaction_from_aubry(A, boundary) -> np.ndarray:
    """Calibrated subaction from prescribed values on the Aubry components.

    u(j) = max over Aubry symbols x of [h(x, j) + u(x)], with u constant on
    each irreducible component (one boundary value per component, in the
    order of ``aubry_set(A).components``).  Any choice of boundary values
    produces a calibrated subaction; the family sweeps out all of them.
    """
    A = validate_potential(A)
    data = aubry_set(A)
    boundary = list(boundary)
    if len(boundary) != len(data.components):
        raise ValueError(f"need one boundary value per component "
                         f"({len(data.components)})")
    h = peierls_barrier_matrix(A)
    d = A.shape[0]
    u = np.full(d, -np.inf)
    for comp, val in zip(data.components, boundary):
        for x in comp.symbols:
            u = np.maximum(u, h[x - 1, :] + val)
    return u


def aubry_to_json(data: AubryData) -> dict:
    return {
        "m_A": data.m_A,
        "cycles": [[s - 1 for s in c] for c in data.maximizing_cycles],
        "T_aubry": [[int(x) for x in row] for row in data.T_aubry],
        "components": [{"symbols": [s - 1 for s in c.symbols],
                        "entropy": c.entropy} for c in data.components],
    }
