import random
from fractions import Fraction

import pytest

from forms6 import linalg
from forms6.exterior import Form, LinearMap6
from forms6.invariants import PrimitiveCoords


@pytest.fixture
def rng():
    return random.Random(20260810)


def rand_fraction(rng, lo=-6, hi=6, dens=(1, 1, 2, 3)):
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def rand_form(rng, grade, sparsity=1.0):
    import itertools
    coeffs = {}
    for axes in itertools.combinations(range(1, 7), grade):
        if rng.random() <= sparsity:
            c = rand_fraction(rng)
            if c:
                coeffs[sum(1 << (a - 1) for a in axes)] = c
    return Form(grade, coeffs)


def rand_coords(rng):
    return PrimitiveCoords(*(rand_fraction(rng) for _ in range(14)))


def rand_vector(rng, lo=-4, hi=4):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(6))


def rand_invertible(rng):
    while True:
        rows = [[rand_fraction(rng, -3, 3, (1, 1, 2)) for _ in range(6)]
                for _ in range(6)]
        if linalg.exact_det(rows) != 0:
            return LinearMap6(rows)


def _interleave(block):
    # block order (x1,x2,x3,y1,y2,y3) -> axes (1,3,5,2,4,6)
    sigma = (0, 2, 4, 1, 3, 5)
    out = [[0] * 6 for _ in range(6)]
    for a in range(6):
        for b in range(6):
            out[sigma[a]][sigma[b]] = block[a][b]
    return out


def rand_symplectic(rng, factors=3):
    """Random element of Sp(6) from elementary generators: block-diagonal
    GL(3) lifts, symmetric shears, and the x/y swap."""
    g = LinearMap6.identity()
    for _ in range(factors):
        kind = rng.randrange(3)
        if kind == 0:
            while True:
                A = [[rand_fraction(rng, -2, 2, (1, 1, 2)) for _ in range(3)]
                     for _ in range(3)]
                if linalg.exact_det(A) != 0:
                    break
            Ait = linalg.exact_inverse([[A[j][i] for j in range(3)]
                                        for i in range(3)])
            block = [[A[i][j] if i < 3 and j < 3
                      else Ait[i - 3][j - 3] if i >= 3 and j >= 3 else 0
                      for j in range(6)] for i in range(6)]
        elif kind == 1:
            B = [[0] * 3 for _ in range(3)]
            for i in range(3):
                for j in range(i, 3):
                    B[i][j] = B[j][i] = rand_fraction(rng, -2, 2, (1, 2))
            block = [[(1 if i == j else 0) if j < 3 or i >= 3 else B[i][j - 3]
                      for j in range(6)] for i in range(6)]
        else:
            block = [[0] * 6 for _ in range(6)]
            for i in range(3):
                block[i][3 + i] = 1
                block[3 + i][i] = -1
        g = g.compose(LinearMap6(_interleave(block)))
    return g
