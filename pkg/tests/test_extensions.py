from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sapforge.cycles import SymbolicMatrix, Var, char_poly_symbolic, composite_cycles
from sapforge.errors import ArgumentError, IdentityViolation, PreconditionError
from sapforge.extensions import (AMBSTAR, _extended_symbolic, INCONCLUSIVE, SIGNED_TRIANGLE, TRIANGLE,
                                 ExtensionSpec, ambstar_extend, check_condition_i,
                                 check_condition_ii, check_conditions, extend_certified,
                                 extend_pattern, forced_sign, identity_for, lift_ambstar,
                                 lift_nilpotent_triangle, run_chain, signed_triangle_extend,
                                 symbolic_minor_det, triangle_extend, verify_ambstar_identity,
                                 verify_triangle_identity)
from sapforge.families import (T2_WITNESS, T3_WITNESS, V_DOUBLE_PRIME_STEP, family,
                               tridiagonal_T, v3_pattern)
from sapforge.jacobian import Status, certify_sap
from sapforge.pattern import (Digraph, Entry, ExactMatrix, Pattern, digraph_of, membership,
                              transpose)
from sapforge.polynomial import MultivarPoly
from sapforge.search import is_nilpotent_exact

T2 = tridiagonal_T(2)
T3 = tridiagonal_T(3)
C2 = Pattern.from_text("@ *\n@ 0")


def test_spec_validation():
    with pytest.raises(ArgumentError):
        ExtensionSpec("bogus", 1, 2)
    with pytest.raises(ArgumentError):
        ExtensionSpec(TRIANGLE, 1, 1)
    with pytest.raises(ArgumentError):
        ExtensionSpec(SIGNED_TRIANGLE, 1, 2)
    with pytest.raises(PreconditionError):
        ExtensionSpec(AMBSTAR, 1, 2, labels=("*", "*"))
    with pytest.raises(PreconditionError):
        ExtensionSpec(AMBSTAR, 1, 2, labels=("*", "@"), variable_on="uw")
    s = ExtensionSpec(AMBSTAR, 2, 1, labels=("*", "@"))
    assert s.variable_on == "wv"
    assert ExtensionSpec.from_dict(s.to_dict()) == s
    t = ExtensionSpec(SIGNED_TRIANGLE, 2, 1, sign_uw=-1, loop="head")
    assert t.to_dict()["sign_uw"] == "-"
    assert ExtensionSpec.from_dict(t.to_dict()) == t


def test_triangle_extend_T2():
    B = triangle_extend(T2, 2, 1)
    assert B.to_text() == "* * 0\n* 0 *\n* 0 *\n"
    with pytest.raises(PreconditionError):
        triangle_extend(T2, 1, 1)
    with pytest.raises(PreconditionError):
        triangle_extend(T3, 2, 1)  # no loop at 2
    with pytest.raises(PreconditionError):
        triangle_extend(T3, 1, 3)  # no arc (1,3)


def test_triangle_extend_keeps_old_entries():
    B = triangle_extend(T3, 3, 2)
    for i, j, e in T3.positions():
        if (i, j) != (3, 3):
            assert B.entry(i, j) is e
    assert B.entry(3, 3) is Entry.ZERO and B.entry(4, 4) is Entry.STAR
    assert B.entry(3, 4) is Entry.STAR and B.entry(4, 2) is Entry.STAR


def test_head_extension_is_transposed_tail_extension():
    P = v3_pattern()
    assert triangle_extend(P, 3, 1, loop="head") == transpose(triangle_extend(transpose(P), 1, 3))


@pytest.mark.parametrize("loop_lab,arc_lab,s_uw,expected", [
    ("+", "+", 1, 1), ("-", "+", 1, -1), ("-", "-", -1, -1), ("+", "-", -1, 1)])
def test_forced_signs(loop_lab, arc_lab, s_uw, expected):
    assert forced_sign(Entry(loop_lab), Entry(arc_lab), s_uw) == expected
    P = Pattern.from_rows([["+", "+"], [arc_lab, loop_lab]])
    B = signed_triangle_extend(P, 2, 1, s_uw)
    sign = {Entry.PLUS: 1, Entry.MINUS: -1}
    assert sign[B.entry(2, 3)] * sign[B.entry(3, 1)] == sign[Entry(loop_lab)] * sign[Entry(arc_lab)]
    assert B.entry(3, 3) is Entry(loop_lab)


def test_signed_extension_needs_sign_pattern():
    with pytest.raises(PreconditionError):
        signed_triangle_extend(T2, 2, 1, 1)
    with pytest.raises(PreconditionError):
        triangle_extend(Pattern.from_text("+ +\n- -"), 2, 1)


def test_ambstar_extend():
    B = ambstar_extend(C2, 2, 1)
    assert B.to_text() == "@ * 0\n@ 0 @\n@ 0 0\n"
    # deleting w returns the base pattern
    assert Pattern.from_rows([r[:2] for r in B.rows[:2]]) == C2
    # (u,v) need not be an arc
    assert ambstar_extend(Pattern.from_text("@ 0\n0 @"), 1, 2).order == 3


def test_condition_i_examples():
    assert check_condition_i(digraph_of(T2), 2, 1).holds
    loop_only = Digraph(3, {(1, 1), (1, 2), (2, 3), (3, 2)})
    assert check_condition_i(loop_only, 1, 2).holds
    res = check_condition_i(digraph_of(v3_pattern()), 3, 1, loop="head")
    assert not res.holds
    assert res.witness == (1, 3, 2)
    with pytest.raises(PreconditionError):
        check_condition_i(digraph_of(T3), 1, 3)


@given(st.integers(2, 6), st.randoms())
def test_condition_i_formulations_agree(n, rnd):
    arcs = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if rnd.random() < 0.4}
    arcs |= {(1, 1), (1, 2)}
    D = Digraph(n, arcs)
    res = check_condition_i(D, 1, 2)
    if not res.holds:
        cyc = res.witness
        assert cyc[0] == 1
        steps = list(zip(cyc, cyc[1:] + cyc[:1]))
        assert all(D.has_arc(*a) for a in steps)
        assert (1, 1) not in steps and (1, 2) not in steps


def test_condition_ii_examples():
    assert check_condition_ii(T2_WITNESS, 2, 1) == (True, 1)
    assert check_condition_ii(T3_WITNESS, 3, 1) == (True, 1)
    Z = ExactMatrix.from_rows([[1, 0, 0], [0, 0, 0], [1, 1, 1]])
    assert not check_condition_ii(Z, 3, 1).holds


def test_lift_example():
    B = lift_nilpotent_triangle(T2_WITNESS, 2, 1)
    assert B == ExactMatrix.from_rows([[1, 1, 0], [-1, 0, 1], [1, 0, -1]])
    assert is_nilpotent_exact(B)
    with pytest.raises(PreconditionError):
        lift_nilpotent_triangle(ExactMatrix.from_rows([[1, 1], [-1, 0]]), 2, 1)


def direct_lift(A, u, v):
    """Build the lifted matrix straight from the tail-form entry rules."""
    n = A.order
    rows = [list(r) + [Fraction(0)] for r in A.rows] + [[Fraction(0)] * (n + 1)]
    w = n + 1
    rows[u - 1][u - 1] = 0
    rows[w - 1][w - 1] = A.entry(u, u)
    rows[w - 1][v - 1] = 1
    rows[u - 1][w - 1] = A.entry(u, v) * A.entry(u, u)
    return ExactMatrix.from_rows(rows)


@given(st.integers(2, 5), st.randoms())
def test_relabeled_lift_matches_direct_rules(n, rnd):
    rows = [[Fraction(rnd.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
    u, v = rnd.sample(range(1, n + 1), 2)
    rows[u - 1][u - 1] = rows[u - 1][u - 1] or Fraction(2)
    rows[u - 1][v - 1] = rows[u - 1][v - 1] or Fraction(-1)
    A = ExactMatrix.from_rows(rows)
    B = lift_nilpotent_triangle(A, u, v)
    assert B == direct_lift(A, u, v)
    assert sum(B.entry(i, i) for i in range(1, n + 2)) == sum(A.entry(i, i) for i in range(1, n + 1))


def test_head_lift_is_transposed_tail_lift():
    A = family("V3").witness
    B = lift_nilpotent_triangle(A, 3, 1, loop="head")
    assert B == lift_nilpotent_triangle(A.transpose(), 1, 3).transpose()


def test_T3_lift_at_end_arc():
    B = lift_nilpotent_triangle(T3_WITNESS, 3, 2)
    assert B.order == 4 and is_nilpotent_exact(B)
    assert certify_sap(triangle_extend(T3, 3, 2), B).verified


def test_triangle_identity_T2():
    X = SymbolicMatrix.from_pattern(T2)
    ident = verify_triangle_identity(X, 2, 1)
    # variables x1..x4 at (1,1),(1,2),(2,1),(2,2); d = x3, k = x4
    assert (ident.d, ident.k, ident.new_var) == (2, 3, 4)
    assert set(ident.S) == {3}
    assert ident.S[3] == -MultivarPoly.var(1)
    # at the witness, S_3 is det A(2,1) up to sign
    assert abs(ident.S[3].evaluate([1, 1, -1, -1])) == 1


def test_triangle_identity_substitution_recovers_z_pX():
    X = SymbolicMatrix.from_pattern(T3)
    ident = verify_triangle_identity(X, 3, 2)
    n = X.order
    Y, new = _extended_symbolic(X, {(3, 3): 0, (n + 1, n + 1): Var(ident.k), (n + 1, 2): 1},
                                (3, n + 1))
    dk = MultivarPoly.var(ident.d) * MultivarPoly.var(ident.k)
    pY = [c.substitute({new: dk}) for c in char_poly_symbolic(Y).coeffs]
    pX = list(char_poly_symbolic(X).coeffs) + [MultivarPoly()]
    assert pY == pX


@pytest.mark.parametrize("name,params,u,v", [("T", {"n": 2}, 2, 1), ("T", {"n": 3}, 3, 2),
                                             ("T", {"n": 3}, 1, 2), ("V3", {}, 1, 3)])
def test_constant_quotient_tracks_condition_ii(name, params, u, v):
    fam = family(name, **params)
    P, A = fam.pattern, fam.witness
    X = SymbolicMatrix.from_pattern(P)
    ident = verify_triangle_identity(X, u, v)
    n = P.order
    pt = [A.entry(i, j) for i, j in X.placement]
    c2 = check_condition_ii(A, u, v)
    assert (ident.constant.evaluate(pt) != 0) == c2.holds
    assert ident.constant == (1 if (n + u + v) % 2 == 0 else -1) * symbolic_minor_det(X, u, v)


def test_triangle_identity_fails_on_condition_i_violation():
    X = SymbolicMatrix.from_pattern(v3_pattern())
    with pytest.raises(IdentityViolation):
        verify_triangle_identity(X, V_DOUBLE_PRIME_STEP.u, V_DOUBLE_PRIME_STEP.v, loop="head")


def test_ambstar_identity_constants():
    x = [MultivarPoly.var(k) for k in range(8)]
    ident = verify_ambstar_identity(SymbolicMatrix.from_pattern(C2), 2, 1)
    assert ident.constant == -x[1]
    assert symbolic_minor_det(SymbolicMatrix.from_pattern(C2), 2, 1) == x[1]
    T3a = tridiagonal_T(3, "@")
    X = SymbolicMatrix.from_pattern(T3a)
    # variables at (1,1),(1,2),(2,1),(2,3),(3,2),(3,3): x12 = x2, x23 = x4
    ident = verify_ambstar_identity(X, 3, 1)
    assert ident.constant == -x[1] * x[3]
    assert symbolic_minor_det(X, 3, 1) == x[1] * x[3]
    assert len(symbolic_minor_det(X, 3, 1)) == 1  # a single transversal


def test_ambstar_identity_vanishing_variable():
    X = SymbolicMatrix.from_pattern(C2)
    ident = verify_ambstar_identity(X, 2, 1, variable_on="wv")
    Y, new = _extended_symbolic(X, {(2, 3): 1}, (3, 1))
    assert new == ident.new_var
    pY = [c.substitute({new: 0}) for c in char_poly_symbolic(Y).coeffs]
    assert pY == list(char_poly_symbolic(X).coeffs) + [MultivarPoly()]
    B = lift_ambstar(family("C2").witness, 2, 1)
    assert is_nilpotent_exact(B)


def _arc_multiset(P):
    D = digraph_of(P)
    return Counter(tuple(sorted(cc.arcs)) for k in range(1, P.order + 1)
                   for cc in composite_cycles(D, k))


@pytest.mark.parametrize("P,u,v", [(T2, 2, 1), (T3, 3, 2), (T3, 1, 2),
                                   (triangle_extend(T3, 3, 2), 4, 2)])
def test_composite_cycles_inject(P, u, v):
    n = P.order
    w = n + 1
    B = triangle_extend(P, u, v)
    old, new = _arc_multiset(P), _arc_multiset(B)
    for arcs, count in old.items():
        mapped = tuple(sorted((w, w) if a == (u, u) else a for a in arcs))
        assert new[mapped] >= count


def test_extend_certified_T2():
    seed = certify_sap(T2, T2_WITNESS)
    spec = ExtensionSpec(TRIANGLE, 2, 1)
    cert = extend_certified(seed, spec)
    assert cert.verified and cert.order == 3 and cert.rank == 3
    assert cert.chain == (spec,) and cert.conditions[0].overall
    with pytest.raises(PreconditionError):
        extend_certified(certify_sap(Pattern.from_text("+ +\n+ +"),
                                     ExactMatrix.from_rows([[1, 1], [1, 1]])), spec)


def test_V_double_prime_rejected_inconclusive():
    fam = family("Vdoubleprime")
    seed = certify_sap(fam.seed, fam.witness)
    cert = extend_certified(seed, fam.script[0])
    assert cert.status is Status.REJECTED and cert.failed_check == "conditions"
    rep = cert.conditions[0]
    assert rep.cond_i is False and rep.label == INCONCLUSIVE
    assert "1->3->2->1" in rep.render()
    assert INCONCLUSIVE in cert.note


def test_V_prime_rejected_by_minor():
    fam = family("Vprime")
    seed = certify_sap(fam.seed, fam.witness)
    cert = extend_certified(seed, fam.script[0])
    assert cert.status is Status.REJECTED
    rep = cert.conditions[0]
    assert rep.cond_ii is False and rep.det_minor == 0


def test_run_chain_empty_and_stops():
    seed = certify_sap(T2, T2_WITNESS)
    assert run_chain(seed, []) == [seed]
    fam = family("Vdoubleprime")
    vseed = certify_sap(fam.seed, fam.witness)
    out = run_chain(vseed, [fam.script[0], ExtensionSpec(TRIANGLE, 1, 3)])
    assert len(out) == 2 and out[-1].status is Status.REJECTED


def test_signed_chain():
    P = Pattern.from_text("+ +\n- -")
    seed = certify_sap(P, T2_WITNESS)
    script = [ExtensionSpec(SIGNED_TRIANGLE, 2, 1, sign_uw=-1),
              ExtensionSpec(SIGNED_TRIANGLE, 3, 1, sign_uw=1)]
    chain = run_chain(seed, script)
    assert [c.status for c in chain] == [Status.VERIFIED] * 3
    for prev, cur, spec in zip(chain, chain[1:], script):
        B = cur.pattern
        w = B.order
        sign = {Entry.PLUS: 1, Entry.MINUS: -1}
        assert (sign[B.entry(spec.u, w)] * sign[B.entry(w, spec.v)]
                == sign[prev.pattern.entry(spec.u, spec.u)] * sign[prev.pattern.entry(spec.u, spec.v)])
        assert membership(cur.realization, B)


@pytest.mark.parametrize("name,params", [("T2beam", {"k": 3}), ("Tbeam", {"n": 3, "m": 3}),
                                         ("C2chain", {"n": 6}), ("T3ambstar", {})])
def test_chain_lifts_are_nilpotent_with_full_rank(name, params):
    fam = family(name, **params)
    chain = run_chain(certify_sap(fam.seed, fam.witness), fam.script)
    assert all(c.verified for c in chain)
    assert chain[-1].pattern == fam.pattern
    for c in chain:
        assert is_nilpotent_exact(c.realization) and c.rank == c.order
    for c, spec in zip(chain, fam.script):
        identity_for(c.pattern, spec)


def test_extend_pattern_dispatch():
    assert extend_pattern(T2, ExtensionSpec(TRIANGLE, 2, 1)) == triangle_extend(T2, 2, 1)
    assert extend_pattern(C2, ExtensionSpec(AMBSTAR, 2, 1)) == ambstar_extend(C2, 2, 1)
    rep = check_conditions(C2, family("C2").witness, ExtensionSpec(AMBSTAR, 2, 1))
    assert rep.cond_i is None and rep.overall
    assert "minor condition holds" in rep.render()
