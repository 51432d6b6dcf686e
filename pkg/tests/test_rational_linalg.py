import random
from fractions import Fraction

import pytest

from knotcocycle.rational_linalg import (SparseMatrix, in_row_span, kernel_basis,
                                         rank, rref, solve_in_span)


def dense_rank_oracle(rows, ncols):
    """Textbook elimination over Fraction, independent of the sparse path."""
    m = [[Fraction(r.get(c, 0)) for c in range(ncols)] for r in rows]
    rk = 0
    for col in range(ncols):
        piv = None
        for i in range(rk, len(m)):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = 1 / m[rk][col]
        m[rk] = [x * inv for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


def test_zero_matrix():
    m = SparseMatrix(3, 4, [{}, {}, {}])
    red, pivots = rref(m)
    assert pivots == [] and rank(m) == 0
    assert len(kernel_basis(m)) == 4


def test_identity():
    m = SparseMatrix(3, 3, [{i: Fraction(1)} for i in range(3)])
    red, pivots = rref(m)
    assert pivots == [0, 1, 2]
    assert kernel_basis(m) == []


def test_rank_one():
    m = SparseMatrix(2, 2, [{0: Fraction(1), 1: Fraction(2)},
                            {0: Fraction(2), 1: Fraction(4)}])
    assert rank(m) == 1


def test_kernel_of_difference_row():
    m = SparseMatrix(1, 2, [{0: Fraction(1), 1: Fraction(-1)}])
    (vec,) = kernel_basis(m)
    assert vec == {0: Fraction(1), 1: Fraction(1)}


def test_zero_row_matrix_kernel():
    m = SparseMatrix(1, 5, [{}])
    assert len(kernel_basis(m)) == 5


def test_random_matrices_against_dense_oracle():
    rng = random.Random(17)
    for _ in range(40):
        nrows, ncols = rng.randrange(1, 8), rng.randrange(1, 8)
        rows = []
        for _ in range(nrows):
            row = {c: Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
                   for c in range(ncols) if rng.random() < 0.5}
            rows.append({c: v for c, v in row.items() if v})
        m = SparseMatrix(nrows, ncols, rows)
        rk = rank(m)
        assert rk == dense_rank_oracle(rows, ncols)
        basis = kernel_basis(m)
        assert len(basis) == ncols - rk
        for vec in basis:
            assert all(s == 0 for s in m.multiply_vector(vec))


def test_permuted_rows_same_kernel_subspace():
    rng = random.Random(23)
    rows = []
    for _ in range(5):
        rows.append({c: Fraction(rng.randrange(-3, 4)) for c in range(6)
                     if rng.random() < 0.6})
    rows = [{c: v for c, v in r.items() if v} for r in rows]
    m1 = SparseMatrix(5, 6, rows)
    perm = rows[::-1]
    m2 = SparseMatrix(5, 6, perm)
    k1, k2 = kernel_basis(m1), kernel_basis(m2)
    assert len(k1) == len(k2)
    # cross membership both ways
    for vec in k1:
        assert all(s == 0 for s in m2.multiply_vector(vec))
    for vec in k2:
        assert all(s == 0 for s in m1.multiply_vector(vec))


def test_solve_in_span():
    rows = [{0: Fraction(1), 1: Fraction(1)}, {1: Fraction(1)}]
    target = {0: Fraction(2), 1: Fraction(3)}
    coeffs = solve_in_span(rows, target)
    assert coeffs == [Fraction(2), Fraction(1)]
    assert solve_in_span([{0: Fraction(1)}], {1: Fraction(1)}) is None


def test_in_row_span():
    m = SparseMatrix(2, 3, [{0: Fraction(1), 2: Fraction(1)},
                            {1: Fraction(1)}])
    assert in_row_span(m, {0: Fraction(2), 1: Fraction(-1), 2: Fraction(2)})
    assert not in_row_span(m, {2: Fraction(1)})


def test_duplicate_triplets_rejected():
    with pytest.raises(ValueError):
        SparseMatrix.from_triplets(1, 2, [(0, 0, 1), (0, 0, 2)])
