import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import det_leibniz, rank_full_pivot
from sapforge.errors import DimensionError
from sapforge.linalg import bareiss_rank, det_exact, det_expand, rank_exact
from sapforge.polynomial import MultivarPoly

entries = st.integers(-3, 3)


def grids(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.integers(1, 5).flatmap(lambda m: st.integers(1, 6).flatmap(lambda n: grids(m, n))))
def test_rank_agrees_with_full_pivot_oracle(M):
    res = bareiss_rank(M)
    assert res.rank == rank_full_pivot(M)
    if res.rank:
        minor = [[M[i][j] for j in res.cols] for i in res.rows]
        assert det_leibniz(minor) != 0


@given(st.integers(1, 5).flatmap(lambda n: grids(n, n)))
def test_determinants_agree(M):
    d = det_leibniz(M)
    assert det_exact(M) == d
    assert det_expand(M) == d


def test_low_rank_products():
    rnd = random.Random(7)
    for _ in range(30):
        n, k = 5, rnd.randint(0, 4)
        U = [[Fraction(rnd.randint(-3, 3)) for _ in range(k)] for _ in range(n)]
        V = [[Fraction(rnd.randint(-3, 3)) for _ in range(n)] for _ in range(k)]
        M = [[sum((U[i][t] * V[t][j] for t in range(k)), Fraction(0)) for j in range(n)]
             for i in range(n)]
        assert rank_exact(M) == rank_full_pivot(M) <= k


def test_symbolic_determinant():
    a, b = MultivarPoly.var(0), MultivarPoly.var(1)
    M = [[a, b, 0], [1, a, 0], [0, 0, b]]
    assert det_expand(M, zero=MultivarPoly()) == (a * a - b) * b


def test_non_square_rejected():
    with pytest.raises(DimensionError):
        det_exact([[1, 2]])
    with pytest.raises(DimensionError):
        det_expand([[1, 2]])
