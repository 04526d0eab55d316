"""Exact linear algebra over the rationals.

Matrices are dense lists of Fraction rows (block sizes here are small).
Rank is computed by fraction-free Bareiss elimination on an integer
rescaling of the matrix; nullspaces come from rational reduced row
echelon form.  Both routes are exact, and the test suite cross-checks
rank against the rref pivot count.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Matrix = list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    assert not a or not b or len(a[0]) == len(b)
    if not a or not b:
        return [[] for _ in a]
    out = zeros(len(a), len(b[0]))
    for i, row in enumerate(a):
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                orow = out[i]
                for j, y in enumerate(brow):
                    if y:
                        orow[j] += x * y
    return out


def is_zero_matrix(a: Matrix) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def _integer_rows(a: Matrix) -> list[list[int]]:
    """Clear denominators row by row; rank is unchanged."""
    out = []
    for row in a:
        lcm = 1
        for x in row:
            if x:
                d = x.denominator
                lcm = lcm // gcd(lcm, d) * d
        out.append([int(x * lcm) for x in row])
    return out


def rank_bareiss(a: Matrix) -> int:
    """Matrix rank by fraction-free Bareiss elimination (exact integers)."""
    if not a or not a[0]:
        return 0
    m = _integer_rows(a)
    rows, cols = len(m), len(m[0])
    rank = 0
    prev = 1
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (pivot * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = pivot
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form over Fraction; returns (rref, pivot columns)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def nullspace(a: Matrix, cols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : a v = 0}, one vector per free column, deterministic order."""
    if not a:
        assert cols is not None, "need column count for an empty matrix"
        return [
            [Fraction(1 if i == j else 0) for i in range(cols)] for j in range(cols)
        ]
    ncols = len(a[0])
    reduced, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fc]
        basis.append(v)
    return basis


def rank(a: Matrix) -> int:
    """Exact rank (fraction-free route)."""
    return rank_bareiss(a)


def solve_in_span(columns: Matrix, target: list[Fraction]) -> list[Fraction] | None:
    """Coefficients x with sum_j x_j columns[:][j] = target, or None.

    `columns` is given as a matrix whose j-th column is the j-th spanning
    vector.  Used to express operator images in a computed subspace basis;
    None signals the image left the span.
    """
    rows = len(target)
    ncols = len(columns[0]) if columns and columns[0] else 0
    if ncols == 0:
        return [] if all(x == 0 for x in target) else None
    augmented = [list(columns[i]) + [target[i]] for i in range(rows)]
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        return None  # inconsistent
    solution = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        solution[pc] = reduced[r][ncols]
    return solution


def kernel_dimension(a: Matrix, cols: int) -> int:
    if not a or not a[0]:
        return cols
    return cols - rank(a)
