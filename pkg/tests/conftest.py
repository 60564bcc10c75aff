import numpy as np
import pytest

# the 10-letter fixture from the worked Aubry construction: five maximizing
# simple cycles abc, cde, fgh, gi, fj (letters a..j as symbols 1..10), all
# other transitions strictly worse
BOOK_EDGES = {1: [2], 2: [3], 3: [1, 4], 4: [5], 5: [3],
              6: [7, 10], 7: [8, 9], 8: [6], 9: [7], 10: [6]}

BOOK_T = np.array([
    [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
])


@pytest.fixture
def book_potential():
    A = np.full((10, 10), -1.0)
    for i, js in BOOK_EDGES.items():
        for j in js:
            A[i - 1, j - 1] = 0.0
    return A


def ch7_eps(e12, e21, e13, e31, e23, e32, e33=1.0):
    return np.array([[0.0, e12, e13],
                     [e21, 0.0, e23],
                     [e31, e32, e33]])


# symmetric under relabeling 1 <-> 2: selection must be (1/2, 1/2)
CH7_SYMMETRIC = ch7_eps(1, 1, 2, 2, 2, 2)
# the asymmetric sample: rho = 1 through the direct 1 <-> 2 channel
CH7_ASYMMETRIC = ch7_eps(1, 1, 2, 2, 3, 3)
# exponent ties in two factors of the mu ratio; resolves via the g-limit
# (g -> 2, the positive root of G^2 - G - 2)
CH7_TIE = ch7_eps(1, 5, 2, 1, 4, 4)
