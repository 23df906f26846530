from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgca.linalg import (
    Matrix, extend_basis, in_span, independent_columns, intersect_spans,
    span_equal, sum_spans,
)


def test_rref_pivots():
    m = Matrix([[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    red, pivots = m.rref()
    assert pivots == [0, 2]
    assert red.rows[0][:2] == [Fraction(1), Fraction(2)]


def test_kernel_annihilates():
    m = Matrix([[1, 2, 3], [4, 5, 6]])
    k = m.kernel()
    assert k.ncols == 1
    assert all(x == 0 for x in m.mul_vec(k.col(0)))


def test_solve_consistent_and_inconsistent():
    m = Matrix([[1, 1], [0, 1], [1, 2]])
    x = m.solve([Fraction(3), Fraction(1), Fraction(4)])
    assert m.mul_vec(x) == [Fraction(3), Fraction(1), Fraction(4)]
    assert m.solve([Fraction(1), Fraction(0), Fraction(0)]) is None


def test_inverse_round_trip():
    m = Matrix([[2, 1], [1, 1]])
    inv = m.inverse()
    assert m @ inv == Matrix.identity(2)
    with pytest.raises(ValueError):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_independent_columns_leftmost():
    m = Matrix([[1, 2, 0], [2, 4, 1]])
    picked = independent_columns(m)
    assert picked.columns() == [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1)]]


def test_extend_basis_greedy():
    base = Matrix.from_columns([[Fraction(1), Fraction(0)]], 2)
    cands = Matrix([[1, 0], [1, 1]])
    extra = extend_basis(base, cands)
    assert extra.ncols == 1
    assert extra.col(0) == [Fraction(1), Fraction(1)]


def test_span_operations():
    a = Matrix.from_columns([[Fraction(1), Fraction(0), Fraction(0)],
                             [Fraction(0), Fraction(1), Fraction(0)]], 3)
    b = Matrix.from_columns([[Fraction(1), Fraction(1), Fraction(0)],
                             [Fraction(0), Fraction(0), Fraction(1)]], 3)
    inter = intersect_spans(a, b)
    assert inter.ncols == 1
    assert in_span(a, inter.col(0)) and in_span(b, inter.col(0))
    total = sum_spans(a, b)
    assert total.ncols == 3
    assert span_equal(total, Matrix.identity(3))


small_fractions = st.fractions(
    min_value=-4, max_value=4, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small_fractions, min_size=3, max_size=3),
                min_size=2, max_size=4))
def test_kernel_and_rank_consistent(rows):
    m = Matrix(rows)
    k = m.kernel()
    assert m.rank() + k.ncols == m.ncols
    for j in range(k.ncols):
        assert all(x == 0 for x in m.mul_vec(k.col(j)))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small_fractions, min_size=3, max_size=3),
                min_size=3, max_size=3),
       st.lists(small_fractions, min_size=3, max_size=3))
def test_solve_reproduces_image_vectors(rows, coeffs):
    m = Matrix(rows)
    b = m.mul_vec(list(coeffs))
    x = m.solve(b)
    assert x is not None
    assert m.mul_vec(x) == b
