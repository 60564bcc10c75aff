"""Finite-alphabet symbolic dynamics: words, cylinders, transition matrices.

Symbols are the integers ``1..d`` throughout the Python API.  A *word* is a
tuple of symbols and names the cylinder of all infinite sequences starting
with it.  Subshifts of finite type are described by d x d 0/1 transition
matrices: the pair ``ij`` may occur iff ``T[i-1, j-1] == 1``.

Serialized (JSON) forms use 0-based symbol indices; every loader/dumper in
this package converts at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

Word = tuple  # tuple of ints in 1..d


def validate_word(w, d: int) -> None:
    """Raise ValueError unless every symbol of ``w`` lies in 1..d."""
    for s in w:
        if not (1 <= int(s) <= d):
            raise ValueError(f"symbol {s} outside alphabet 1..{d}")


def validate_transition_matrix(T) -> np.ndarray:
    """Check entries are exactly 0/1 and return T as an int array."""
    T = np.asarray(T)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("transition matrix must be square")
    if not np.isin(T, (0, 1)).all():
        raise ValueError("transition matrix entries must be 0 or 1")
    return T.astype(int)


def full_shift_matrix(d: int) -> np.ndarray:
    """Transition matrix of the full shift on d symbols (all ones)."""
    return np.ones((d, d), dtype=int)


def word_distance(x, y) -> float:
    """2^(-n) where n is the first index at which the words disagree.

    Finite prefixes of points are compared position by position; if one word
    is a prefix of the other (in particular if they are equal) the distance
    is 0 by convention, since the corresponding cylinders intersect.
    """
    n = min(len(x), len(y))
    for i in range(n):
        if x[i] != y[i]:
            return 2.0 ** (-i)
    return 0.0


def sft_allows(T, w) -> bool:
    """True iff every consecutive pair of ``w`` is an allowed transition."""
    T = validate_transition_matrix(T)
    validate_word(w, T.shape[0])
    return all(T[w[k] - 1, w[k + 1] - 1] == 1 for k in range(len(w) - 1))


def irreducible_components(T):
    """Partition the recurrent symbols of an SFT into irreducible classes.

    Two symbols i, j are associated when there is a nonempty path i -> j and
    a nonempty path j -> i; the classes of this relation are the irreducible
    components.  A symbol through which no cycle passes is related to nothing
    (not even itself, since the relation needs a word "i...i") and is
    reported in the transient bucket instead of as a singleton class.

    Returns
    -------
    classes : list of sorted lists of symbols (1-based), sorted by minimum
    transient : sorted list of symbols on no cycle
    """
    T = validate_transition_matrix(T)
    d = T.shape[0]
    n_comp, labels = connected_components(csr_matrix(T), directed=True,
                                          connection="strong")
    groups = [[] for _ in range(n_comp)]
    for s in range(d):
        groups[labels[s]].append(s + 1)
    classes, transient = [], []
    for g in groups:
        if len(g) > 1 or T[g[0] - 1, g[0] - 1] == 1:
            classes.append(sorted(g))
        else:
            transient.append(g[0])
    classes.sort(key=min)
    return classes, sorted(transient)


def enumerate_simple_cycles(d: int, T=None):
    """All simple cycles on 1..d allowed by T (all of them if T is None).

    A simple cycle visits pairwise-distinct symbols; each cycle is reported
    once, as the rotation starting at its smallest symbol.  Enumeration is a
    DFS rooted at each symbol r in increasing order, extending only through
    symbols > r, so rotations are never produced twice.
    """
    if d < 1:
        raise ValueError("alphabet size must be >= 1")
    if T is None:
        T = full_shift_matrix(d)
    T = validate_transition_matrix(T)
    cycles = []

    def extend(root, path, used):
        last = path[-1]
        if T[last - 1, root - 1] == 1:
            cycles.append(tuple(path))
        for nxt in range(root + 1, d + 1):
            if nxt not in used and T[last - 1, nxt - 1] == 1:
                used.add(nxt)
                path.append(nxt)
                extend(root, path, used)
                path.pop()
                used.remove(nxt)

    for root in range(1, d + 1):
        extend(root, [root], {root})
    return cycles


def canonical_rotation(cycle):
    """Rotation of a cycle starting at its smallest symbol (equality key)."""
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def cycle_rotations(cycle):
    """All rotations of a cycle, i.e. the bricks of the periodic orbit."""
    n = len(cycle)
    return [tuple(cycle[k:]) + tuple(cycle[:k]) for k in range(n)]


def cylinder_refinement_children(w, d: int):
    """The d one-symbol refinements w.a of the cylinder named by ``w``."""
    return [tuple(w) + (a,) for a in range(1, d + 1)]


def is_primitive(word) -> bool:
    """True iff the word is not a power of a strictly shorter word."""
    n = len(word)
    for p in range(1, n):
        if n % p == 0 and all(word[i] == word[i % p] for i in range(n)):
            return False
    return True


@dataclass(frozen=True)
class PeriodicOrbit:
    """Periodic point (x0...x_{n-1})^inf, given by its primitive generator."""

    generator: tuple

    def __post_init__(self):
        if len(self.generator) == 0:
            raise ValueError("empty generator")
        if not is_primitive(self.generator):
            raise ValueError(f"generator {self.generator} is a power of a "
                             "shorter word")
        object.__setattr__(self, "generator", tuple(self.generator))

    @property
    def period(self) -> int:
        return len(self.generator)

    def points(self):
        """The orbit as the rotations of the generator."""
        return cycle_rotations(self.generator)


# --- serialization (0-based symbols on the wire) ---

def word_to_json(w) -> list:
    return [int(s) - 1 for s in w]


def word_from_json(data) -> tuple:
    return tuple(int(s) + 1 for s in data)


def transition_to_json(T) -> list:
    return [[int(x) for x in row] for row in np.asarray(T)]


def transition_from_json(rows) -> np.ndarray:
    return validate_transition_matrix(np.asarray(rows))
