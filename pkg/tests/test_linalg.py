import random
from fractions import Fraction

import numpy as np
import pytest

from forms6 import linalg


def rand_mat(rng, n, m=None):
    m = m or n
    return [[Fraction(rng.randint(-5, 5), rng.choice((1, 2))) for _ in range(m)]
            for _ in range(n)]


def test_exact_rank_against_numpy(rng):
    for _ in range(30):
        a = rand_mat(rng, rng.randint(2, 6), rng.randint(2, 6))
        assert linalg.exact_rank(a) == np.linalg.matrix_rank(
            linalg.to_float_matrix(a), tol=1e-9)


def test_exact_nullspace(rng):
    for _ in range(20):
        a = rand_mat(rng, 4, 6)
        for v in linalg.exact_nullspace(a):
            assert all(sum(r[j] * v[j] for j in range(6)) == 0 for r in a)
        assert len(linalg.exact_nullspace(a)) == 6 - linalg.exact_rank(a)


def test_exact_inverse_and_det(rng):
    for _ in range(20):
        a = rand_mat(rng, 5)
        d = linalg.exact_det(a)
        if d == 0:
            with pytest.raises(ZeroDivisionError):
                linalg.exact_inverse(a)
            continue
        inv = linalg.exact_inverse(a)
        prod = [[sum(a[i][k] * inv[k][j] for k in range(5)) for j in range(5)]
                for i in range(5)]
        assert prod == [[1 if i == j else 0 for j in range(5)] for i in range(5)]
        assert abs(float(d) - np.linalg.det(linalg.to_float_matrix(a))) < 1e-6 * max(1, abs(float(d)))


def test_exact_solve(rng):
    a = [[1, 2], [3, 4]]
    x = linalg.exact_solve(a, [5, 6])
    assert x == (Fraction(-4), Fraction(9, 2))
    # inconsistent system
    assert linalg.exact_solve([[1, 1], [2, 2]], [1, 3]) is None


def test_signature_counts():
    assert linalg.signature_counts(np.eye(6).tolist()) == (0, 6, 0)
    assert linalg.signature_counts(np.diag([1, 1, 1, -1, -1, -1]).tolist()) == (0, 3, 3)
    assert linalg.signature_counts([[0] * 6 for _ in range(6)]) == (6, 0, 0)
    with pytest.raises(ValueError):
        linalg.signature_counts([[0, 1, 0, 0, 0, 0]] + [[0] * 6 for _ in range(5)])


def test_positive_definite():
    assert linalg.is_positive_definite([[2, 1], [1, 2]])
    assert not linalg.is_positive_definite([[1, 2], [2, 1]])


@pytest.fixture
def rng():
    return random.Random(7)
