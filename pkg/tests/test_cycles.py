import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import brute_force_cycles, charpoly_bareiss, charpoly_float
from sapforge.cycles import (CharPoly, SymbolicMatrix, char_poly_numeric, char_poly_symbolic,
                             composite_cycles, enumerate_simple_cycles, signed_cycle_sum)
from sapforge.errors import ArgumentError
from sapforge.linalg import det_expand
from sapforge.pattern import Digraph, ExactMatrix, Pattern
from sapforge.polynomial import MultivarPoly


def random_digraph(rnd, n, p):
    return Digraph(n, {(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if rnd.random() < p})


def random_matrix(rnd, n, density=0.6, lo=-3, hi=3):
    return ExactMatrix.from_rows([[Fraction(rnd.randint(lo, hi)) if rnd.random() < density else 0
                                   for _ in range(n)] for _ in range(n)])


@pytest.mark.parametrize("seed", range(25))
def test_simple_cycles_match_networkx_and_brute_force(seed):
    rnd = random.Random(seed)
    n = rnd.randint(1, 6)
    D = random_digraph(rnd, n, 0.45)
    ours = {c.vertices for c in enumerate_simple_cycles(D)}
    assert ours == brute_force_cycles(n, D.arcs)
    G = nx.DiGraph()
    G.add_nodes_from(range(1, n + 1))
    G.add_edges_from(D.arcs)
    assert len(ours) == sum(1 for _ in nx.simple_cycles(G))


def test_complete_digraph_on_four_vertices():
    D = Digraph(4, {(i, j) for i in range(1, 5) for j in range(1, 5)})
    cycles = enumerate_simple_cycles(D)
    # 4 loops, 6 two-cycles, 8 three-cycles, 6 four-cycles
    assert [sum(1 for c in cycles if c.length == k) for k in range(1, 5)] == [4, 6, 8, 6]
    # composite 4-cycles of K4 with loops: one per permutation of four points
    assert len(composite_cycles(D, 4)) == 24


def test_cycles_are_sorted_and_canonical():
    D = Digraph(3, {(1, 2), (2, 3), (3, 1), (2, 1), (3, 3)})
    cyc = [c.vertices for c in enumerate_simple_cycles(D)]
    assert cyc == [(3,), (1, 2), (1, 2, 3)]


def test_composite_cycles_are_disjoint():
    rnd = random.Random(3)
    D = random_digraph(rnd, 6, 0.5)
    for k in range(1, 7):
        for cc in composite_cycles(D, k):
            verts = [v for c in cc.cycles for v in c.vertices]
            assert len(verts) == len(set(verts)) == k
    with pytest.raises(ArgumentError):
        composite_cycles(D, 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_charpoly_matches_bareiss_oracle(n):
    rnd = random.Random(1000 + n)
    for _ in range(100):
        A = random_matrix(rnd, n)
        assert list(char_poly_numeric(A).coeffs) == charpoly_bareiss(A.rows)


@pytest.mark.parametrize("n", [2, 5, 8])
def test_charpoly_matches_float_oracles(n):
    rnd = random.Random(n)
    A = random_matrix(rnd, n, density=0.5, lo=-2, hi=2)
    exact = np.array([float(c) for c in char_poly_numeric(A).coeffs])
    M = A.to_float()
    assert np.allclose(exact, charpoly_float(M), atol=1e-8)
    assert np.allclose(exact, np.poly(M)[1:], atol=1e-6)


def test_signed_cycle_sums_give_trace_and_determinant():
    A = ExactMatrix.from_rows([[1, 2, 0], [3, 4, 5], [0, 6, 7]])
    assert signed_cycle_sum(A, 1) == 12
    # E_n equals the determinant
    assert signed_cycle_sum(A, 3) == 1 * (28 - 30) - 2 * 21


@given(st.integers(1, 6), st.randoms())
def test_strictly_upper_triangular_is_nilpotent(n, rnd):
    rows = [[Fraction(rnd.randint(-5, 5)) if j > i else 0 for j in range(n)] for i in range(n)]
    A = ExactMatrix.from_rows(rows)
    assert all(signed_cycle_sum(A, k) == 0 for k in range(1, n + 1))
    assert char_poly_numeric(A).is_monomial()


def test_charpoly_helpers():
    cp = CharPoly((Fraction(-1), Fraction(0), Fraction(0)))
    assert cp.full() == [1, -1, 0, 0]
    assert cp.zero_root_multiplicity() == 2
    assert not cp.is_monomial()


def test_symbolic_T2_coefficients():
    X = SymbolicMatrix.from_pattern(Pattern.from_text("* *\n* *"))
    x1, x2, x3, x4 = (MultivarPoly.var(k) for k in range(4))
    f1, f2 = char_poly_symbolic(X).coeffs
    assert f1 == -(x1 + x4)
    assert f2 == x1 * x4 - x2 * x3


@pytest.mark.parametrize("text", ["* * 0\n* 0 *\n0 * *", "@ * 0\n@ 0 *\n@ 0 0",
                                  "* * 0 0\n* 0 * 0\n0 * 0 *\n* 0 * *"])
def test_symbolic_charpoly_matches_determinant_expansion(text):
    P = Pattern.from_text(text)
    X = SymbolicMatrix.from_pattern(P)
    n = X.order
    z = MultivarPoly.var(X.num_vars)  # an extra variable standing for z
    grid = [[(z if i == j else MultivarPoly()) - X.entry_poly(i + 1, j + 1) for j in range(n)]
            for i in range(n)]
    det = det_expand(grid, zero=MultivarPoly())
    expected = z ** n
    for r, f in enumerate(char_poly_symbolic(X).coeffs, start=1):
        expected = expected + f * z ** (n - r)
    assert det == expected


@given(st.randoms())
def test_substitution_commutes_with_charpoly(rnd):
    P = Pattern.from_text("* * 0 *\n* 0 * 0\n0 * * *\n* 0 * 0")
    X = SymbolicMatrix.from_pattern(P)
    pt = [Fraction(rnd.randint(-4, 4), rnd.randint(1, 3)) for _ in range(X.num_vars)]
    assert char_poly_symbolic(X).substitute(pt) == char_poly_numeric(X.substitute(pt))


def test_symbolic_matrix_validation():
    X = SymbolicMatrix.from_pattern(Pattern.from_text("@ *\n@ 0"))
    assert X.placement == ((1, 1), (1, 2), (2, 1))
    assert X.var_at(1, 2) == 1 and X.var_at(2, 2) is None
    with pytest.raises(ArgumentError):
        X.substitute([1, 2])
