import random
from fractions import Fraction

from chiralg import linalg


def rand_matrix(rng, rows, cols, rank=None):
    m = [
        [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
        for _ in range(rows)
    ]
    return m


def test_rank_simple():
    m = [
        [Fraction(1), Fraction(2)],
        [Fraction(2), Fraction(4)],
    ]
    assert linalg.rank(m) == 1


def test_rank_matches_rref_pivots():
    rng = random.Random(23)
    for _ in range(40):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = rand_matrix(rng, rows, cols)
        _, pivots = linalg.rref(m)
        assert linalg.rank_bareiss(m) == len(pivots)


def test_nullspace_is_kernel():
    rng = random.Random(31)
    for _ in range(30):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = rand_matrix(rng, rows, cols)
        basis = linalg.nullspace(m, cols=cols)
        assert len(basis) == cols - linalg.rank(m)
        for v in basis:
            image = [sum(m[i][j] * v[j] for j in range(cols)) for i in range(rows)]
            assert all(x == 0 for x in image)


def test_nullspace_empty_matrix():
    basis = linalg.nullspace([], cols=3)
    assert len(basis) == 3


def test_solve_in_span():
    cols = [
        [Fraction(1), Fraction(0)],
        [Fraction(0), Fraction(1)],
        [Fraction(1), Fraction(1)],
    ]
    # span of (1,0,1) and (0,1,1): columns arranged as matrix
    span = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)], [Fraction(1), Fraction(1)]]
    sol = linalg.solve_in_span(span, [Fraction(2), Fraction(3), Fraction(5)])
    assert sol == [Fraction(2), Fraction(3)]
    assert linalg.solve_in_span(span, [Fraction(1), Fraction(0), Fraction(0)]) is None


def test_mat_mul_and_zero():
    a = [[Fraction(1), Fraction(2)]]
    b = [[Fraction(3)], [Fraction(4)]]
    assert linalg.mat_mul(a, b) == [[Fraction(11)]]
    assert linalg.is_zero_matrix([[Fraction(0)]])
    assert not linalg.is_zero_matrix([[Fraction(1)]])
