from math import prod

import pytest
import sympy
from hypothesis import given, strategies as st

from affcox.exceptions import PreconditionError
from affcox.intmat import (conjugate_into_basis, det, hnf_basis, integral_inverse, matmul,
                           smith_invariants, solve_upper)
from oracles import sympy_smith

small = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(1, 4).flatmap(square))
def test_det_matches_sympy(M):
    assert det(M) == int(sympy.Matrix(M).det())


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.lists(
    st.lists(small, min_size=n, max_size=n), min_size=1, max_size=4))))
def test_smith_matches_sympy(data):
    _, rows = data
    mine = sorted(d for d in smith_invariants(rows) if d)
    assert mine == sympy_smith(rows)


@given(st.integers(1, 3).flatmap(square))
def test_hnf_shape_and_span(M):
    n = len(M)
    if det(M) == 0:
        return
    cols = [tuple(M[i][j] for i in range(n)) for j in range(n)]
    B = hnf_basis(cols, n)
    for i in range(n):
        assert B[i][i] > 0
        for j in range(n):
            if i > j:
                assert B[i][j] == 0
            elif i < j:
                assert 0 <= B[i][j] < B[i][i]
    assert abs(det(B)) == abs(det(M))
    for c in cols:
        assert solve_upper(B, c) is not None


def test_hnf_is_canonical():
    a = hnf_basis([(2, 0), (1, 1)], 2)
    b = hnf_basis([(1, 1), (3, 1), (0, 2)], 2)
    assert a == b


def test_smith_of_doubled_identity():
    assert smith_invariants([[2, 0], [0, 2]]) == [2, 2]
    assert prod(smith_invariants([[2, 0, 0], [0, 2, 0], [0, 0, 2]])) == 8


def test_solve_upper_rejects_outside():
    B = ((2, 1), (0, 3))
    assert solve_upper(B, (1, 0)) is None
    assert solve_upper(B, (3, 3)) == (1, 1)


def test_integral_inverse_and_conjugation():
    M = ((2, 1), (1, 1))
    assert matmul(M, integral_inverse(M)) == ((1, 0), (0, 1))
    with pytest.raises(PreconditionError):
        integral_inverse(((2, 0), (0, 1)))
    # the swap acts on the lattice spanned by (1,1),(0,2)
    B = ((1, 0), (1, 2))
    C = conjugate_into_basis(((0, 1), (1, 0)), B)
    assert matmul(B, C) == matmul(((0, 1), (1, 0)), B)
