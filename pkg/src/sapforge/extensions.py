"""Triangle and ⊛-extensions of patterns, their conditions, lifts and identities.

A triangle extension inserts a new vertex ``w = n+1`` on an arc ``(u, v)``
and moves a loop onto ``w``.  By default the loop sits at the tail ``u``:

    (u,u) -> (w,w),   new arcs (u,w) and (w,v).

The mirrored form (``loop="head"``) takes the loop from the head ``v``
instead; it is the tail form applied to the transposed pattern, and every
routine here implements it exactly that way.

A ⊛-extension adds ``w`` with the two arcs ``(u,w), (w,v)`` and no loop
move; at least one new arc is labelled ``@``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

from .cycles import SymbolicMatrix, Var, char_poly_symbolic, enumerate_simple_cycles
from .errors import ArgumentError, IdentityViolation, PreconditionError
from .jacobian import SapCertificate, Status, certify_sap
from .linalg import det_exact, det_expand
from .pattern import (Digraph, Entry, ExactMatrix, Pattern, PatternKind, digraph_of,
                      inverse_permutation, permute, transpose)
from .polynomial import MultivarPoly

TRIANGLE = "triangle"
SIGNED_TRIANGLE = "signed-triangle"
AMBSTAR = "ambstar"
KINDS = (TRIANGLE, SIGNED_TRIANGLE, AMBSTAR)

INCONCLUSIVE = "INCONCLUSIVE_SAP"


@dataclass(frozen=True)
class ExtensionSpec:
    """One extension step.

    ``sign_uw`` is used by signed-triangle steps; ``labels`` (for (u,w) and
    (w,v)) and ``variable_on`` by ⊛ steps; ``loop`` selects which end of the
    arc carries the loop that a triangle step moves.
    """

    kind: str
    u: int
    v: int
    sign_uw: int | None = None
    labels: tuple[str, str] | None = None
    loop: str = "tail"
    variable_on: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown extension kind {self.kind!r}")
        if self.u == self.v:
            raise ArgumentError("extension arc needs u != v")
        if self.loop not in ("tail", "head"):
            raise ArgumentError(f"loop must be 'tail' or 'head', got {self.loop!r}")
        if self.kind == SIGNED_TRIANGLE:
            if self.sign_uw not in (1, -1):
                raise ArgumentError("signed-triangle steps need sign_uw = +1 or -1")
        if self.kind == AMBSTAR:
            labels = tuple(self.labels or ("@", "@"))
            if len(labels) != 2 or any(l not in ("*", "@") for l in labels):
                raise ArgumentError("ambstar labels must be two of '*', '@'")
            if "@" not in labels:
                raise PreconditionError("an ambstar extension needs at least one '@' arc")
            object.__setattr__(self, "labels", labels)
            var_on = self.variable_on or ("uw" if labels[0] == "@" else "wv")
            if var_on not in ("uw", "wv"):
                raise ArgumentError("variable_on must be 'uw' or 'wv'")
            if labels[0 if var_on == "uw" else 1] != "@":
                raise PreconditionError("the variable arc of an ambstar extension must be '@'")
            object.__setattr__(self, "variable_on", var_on)

    @property
    def loop_vertex(self) -> int:
        return self.u if self.loop == "tail" else self.v

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "u": self.u, "v": self.v}
        if self.kind == SIGNED_TRIANGLE:
            d["sign_uw"] = "+" if self.sign_uw > 0 else "-"
        if self.kind == AMBSTAR:
            d["labels"] = list(self.labels)
            d["variable_on"] = self.variable_on
        if self.kind != AMBSTAR and self.loop != "tail":
            d["loop"] = self.loop
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExtensionSpec":
        if not isinstance(d, dict):
            raise ArgumentError("extension step must be a JSON object")
        try:
            kind, u, v = d["kind"], int(d["u"]), int(d["v"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed extension step {d!r}") from exc
        s = d.get("sign_uw")
        if isinstance(s, str):
            s = {"+": 1, "-": -1}.get(s, s)
        labels = d.get("labels")
        return cls(kind, u, v, sign_uw=s, labels=tuple(labels) if labels else None,
                   loop=d.get("loop", "tail"), variable_on=d.get("variable_on"))


# ---------------------------------------------------------------------------
# pattern constructions

def _check_vertices(n: int, u: int, v: int):
    if not (1 <= u <= n and 1 <= v <= n):
        raise PreconditionError(f"vertices must lie in 1..{n}, got u={u}, v={v}")
    if u == v:
        raise PreconditionError("extension arc needs u != v")


def _grow(P: Pattern) -> list[list[Entry]]:
    n = P.order
    rows = [list(r) + [Entry.ZERO] for r in P.rows]
    rows.append([Entry.ZERO] * (n + 1))
    return rows


def _tail_triangle(P: Pattern, u: int, v: int, lab_uw: Entry, lab_wv: Entry) -> Pattern:
    n = P.order
    _check_vertices(n, u, v)
    if P.entry(u, u).is_zero:
        raise PreconditionError(f"no loop at vertex {u}")
    if P.entry(u, v).is_zero:
        raise PreconditionError(f"no arc ({u},{v})")
    w = n + 1
    rows = _grow(P)
    rows[w - 1][w - 1] = P.entry(u, u)
    rows[u - 1][u - 1] = Entry.ZERO
    rows[u - 1][w - 1] = lab_uw
    rows[w - 1][v - 1] = lab_wv
    return Pattern.from_rows(rows)


def _triangle(P: Pattern, u: int, v: int, loop: str, lab_uw: Entry, lab_wv: Entry) -> Pattern:
    if loop == "tail":
        return _tail_triangle(P, u, v, lab_uw, lab_wv)
    # loop at v: the tail construction on the transpose, arc (v,u)
    return transpose(_tail_triangle(transpose(P), v, u, lab_wv, lab_uw))


def triangle_extend(P: Pattern, u: int, v: int, *, loop: str = "tail") -> Pattern:
    """Triangle extension of a nonzero (or zero-nonzero) pattern at ``(u, v)``.

    Both new arcs are labelled ``*``.  Sign patterns need a sign choice; use
    :func:`signed_triangle_extend`.
    """
    if P.kind is PatternKind.SIGN and any(e is not Entry.ZERO for r in P.rows for e in r):
        raise PreconditionError("sign patterns need signed_triangle_extend")
    if P.kind is PatternKind.MIXED:
        raise PreconditionError("mixed patterns cannot be extended")
    return _triangle(P, u, v, loop, Entry.STAR, Entry.STAR)


def forced_sign(loop_label: Entry, arc_label: Entry, sign_uw: int) -> int:
    """Sign of (w,v) making sgn(u,w)sgn(w,v) = sgn(loop)sgn(u,v)."""
    s = lambda e: 1 if e is Entry.PLUS else -1
    return s(loop_label) * s(arc_label) * sign_uw


def signed_triangle_extend(P: Pattern, u: int, v: int, sign_uw: int, *,
                           loop: str = "tail") -> Pattern:
    if P.kind is not PatternKind.SIGN:
        raise PreconditionError("signed triangle extensions need a sign pattern")
    if sign_uw not in (1, -1):
        raise ArgumentError("sign_uw must be +1 or -1")
    n = P.order
    _check_vertices(n, u, v)
    lv = u if loop == "tail" else v
    if P.entry(lv, lv).is_zero:
        raise PreconditionError(f"no loop at vertex {lv}")
    if P.entry(u, v).is_zero:
        raise PreconditionError(f"no arc ({u},{v})")
    s_wv = forced_sign(P.entry(lv, lv), P.entry(u, v), sign_uw)
    lab = lambda s: Entry.PLUS if s > 0 else Entry.MINUS
    return _triangle(P, u, v, loop, lab(sign_uw), lab(s_wv))


def ambstar_extend(P: Pattern, u: int, v: int, labels: Sequence[str] = ("@", "@")) -> Pattern:
    """⊛-extension: new vertex ``w`` with arcs (u,w), (w,v) and nothing else."""
    if not P.is_zero_nonzero():
        raise PreconditionError("ambstar extensions need a zero-nonzero pattern")
    labels = tuple(labels)
    if len(labels) != 2 or any(l not in ("*", "@") for l in labels):
        raise ArgumentError("labels must be two of '*', '@'")
    if "@" not in labels:
        raise PreconditionError("at least one new arc must be '@'")
    n = P.order
    _check_vertices(n, u, v)
    w = n + 1
    rows = _grow(P)
    rows[u - 1][w - 1] = Entry(labels[0])
    rows[w - 1][v - 1] = Entry(labels[1])
    return Pattern.from_rows(rows)


def extend_pattern(P: Pattern, spec: ExtensionSpec) -> Pattern:
    if spec.kind == TRIANGLE:
        if P.kind is PatternKind.SIGN and any(e is not Entry.ZERO for r in P.rows for e in r):
            raise PreconditionError("sign patterns need a signed-triangle step")
        return triangle_extend(P, spec.u, spec.v, loop=spec.loop)
    if spec.kind == SIGNED_TRIANGLE:
        return signed_triangle_extend(P, spec.u, spec.v, spec.sign_uw, loop=spec.loop)
    return ambstar_extend(P, spec.u, spec.v, spec.labels)


# ---------------------------------------------------------------------------
# conditions

class ConditionI(NamedTuple):
    holds: bool
    witness: tuple[int, ...] | None  # cycle through the loop vertex, first vertex repeated implicitly


class ConditionII(NamedTuple):
    holds: bool
    det: object


def _cycle_avoiding(D: Digraph, u: int, v: int) -> tuple[int, ...] | None:
    """Shortest cycle through ``u`` using neither (u,u) nor (u,v)."""
    parent: dict[int, int] = {}
    queue = deque()
    for x in D.successors[u]:
        if x not in (u, v) and x not in parent:
            parent[x] = u
            queue.append(x)
    # v may still be reached from u through other vertices
    while queue:
        x = queue.popleft()
        for y in D.successors[x]:
            if y == u:
                path = [x]
                while path[-1] != u:
                    path.append(parent[path[-1]])
                return tuple(reversed(path))
            if y not in parent:
                parent[y] = x
                queue.append(y)
    return None


def condition_i_by_components(D: Digraph, u: int, v: int) -> bool:
    return D.without_arc(u, v).strong_component(u) == frozenset({u})


def condition_i_by_cycles(D: Digraph, u: int, v: int) -> bool:
    for c in enumerate_simple_cycles(D):
        if u in c.vertices and (u, u) not in c.arcs and (u, v) not in c.arcs:
            return False
    return True


def check_condition_i(D: Digraph, u: int, v: int, *, loop: str = "tail") -> ConditionI:
    """Every cycle through the loop vertex uses the loop or the arc (u,v).

    Computed from the strong component of the loop vertex in ``D - (u,v)``
    and, independently, from the simple-cycle list; the two must agree.  On
    failure the witness is a cycle (vertex sequence, loop vertex first)
    through the loop vertex avoiding both arcs.
    """
    if not D.has_arc(u, v):
        raise PreconditionError(f"arc ({u},{v}) is not in the digraph")
    if loop == "head":
        res = check_condition_i(D.reversed(), v, u)
        if res.witness is None:
            return res
        back = tuple(reversed(res.witness))
        k = back.index(v)
        return ConditionI(res.holds, back[k:] + back[:k])
    by_comp = condition_i_by_components(D, u, v)
    by_cyc = condition_i_by_cycles(D, u, v)
    if by_comp != by_cyc:  # pragma: no cover - the formulations are equivalent
        raise AssertionError("condition (i) formulations disagree")
    if by_comp:
        return ConditionI(True, None)
    witness = _cycle_avoiding(D, u, v)
    assert witness is not None
    return ConditionI(False, witness)


def check_condition_ii(A: ExactMatrix, u: int, v: int) -> ConditionII:
    """det A(u,v) != 0, where A(u,v) deletes row ``u`` and column ``v``."""
    n = A.order
    if not (1 <= u <= n and 1 <= v <= n):
        raise PreconditionError(f"vertices must lie in 1..{n}")
    d = det_exact(A.minor(u, v)) if n > 1 else 1
    return ConditionII(d != 0, d)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the applicability checks for one extension step.

    ``cond_i`` is None for ⊛ steps, which have no cycle condition.  A failed
    report means the theorem does not apply; it says nothing against the
    extended pattern being spectrally arbitrary.
    """

    spec: ExtensionSpec
    cond_i: bool | None
    cycle: tuple[int, ...] | None
    cond_ii: bool
    det_minor: object

    @property
    def overall(self) -> bool:
        return (self.cond_i is not False) and self.cond_ii

    @property
    def loop_vertex(self) -> int | None:
        return None if self.spec.kind == AMBSTAR else self.spec.loop_vertex

    @property
    def label(self) -> str:
        return "OK" if self.overall else INCONCLUSIVE

    def render(self) -> str:
        s = self.spec
        lines = [f"extension {s.kind} at ({s.u},{s.v})"
                 + (f", loop at {self.loop_vertex}" if self.loop_vertex else "")]
        if self.cond_i is not None:
            if self.cond_i:
                lines.append("condition (i) holds")
            else:
                lv = self.loop_vertex
                cyc = "->".join(map(str, self.cycle + self.cycle[:1]))
                lines.append(f"condition (i) violated: cycle {cyc} passes through {lv} "
                             f"avoiding ({lv},{lv}) and ({s.u},{s.v})")
        name = "condition (ii)" if self.cond_i is not None else "minor condition"
        if self.cond_ii:
            lines.append(f"{name} holds: det A({s.u},{s.v}) = {self.det_minor}")
        else:
            lines.append(f"{name} violated: det A({s.u},{s.v}) = 0")
        if not self.overall:
            lines.append(f"{INCONCLUSIVE}: the extension theorem does not apply; "
                         "this is not evidence that the pattern fails to be spectrally arbitrary")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        from .numbers import format_rational, is_rational

        det = self.det_minor
        return {
            "spec": self.spec.to_dict(),
            "cond_i": self.cond_i,
            "cycle": list(self.cycle) if self.cycle else None,
            "loop_vertex": self.loop_vertex,
            "cond_ii": self.cond_ii,
            "det_minor": format_rational(det) if is_rational(det) and not hasattr(det, "field")
            else str(det),
            "overall": self.overall,
            "label": self.label,
        }


def check_conditions(P: Pattern, A: ExactMatrix, spec: ExtensionSpec) -> ConditionReport:
    if spec.kind == AMBSTAR:
        c2 = check_condition_ii(A, spec.u, spec.v)
        return ConditionReport(spec, None, None, c2.holds, c2.det)
    c1 = check_condition_i(digraph_of(P), spec.u, spec.v, loop=spec.loop)
    c2 = check_condition_ii(A, spec.u, spec.v)
    return ConditionReport(spec, c1.holds, c1.witness, c2.holds, c2.det)


# ---------------------------------------------------------------------------
# lifted realizations

def _pad(A: ExactMatrix) -> list[list]:
    n = A.order
    rows = [list(r) + [0] for r in A.rows]
    rows.append([0] * (n + 1))
    return rows


def _canonical_lift(A: ExactMatrix) -> ExactMatrix:
    """The lift in the frame where the loop is at n and the arc is (n, n-1)."""
    n = A.order
    B = _pad(A)
    B[n - 1][n - 1] = 0
    B[n][n] = A.entry(n, n)
    B[n][n - 2] = 1
    B[n - 1][n] = A.entry(n, n - 1) * A.entry(n, n)
    return ExactMatrix.from_rows(B)


def _tail_lift(A: ExactMatrix, u: int, v: int, unit_sign: int) -> ExactMatrix:
    n = A.order
    _check_vertices(n, u, v)
    if A.entry(u, u) == 0 or A.entry(u, v) == 0:
        raise PreconditionError(f"lift needs A[{u},{u}] != 0 and A[{u},{v}] != 0")
    others = [x for x in range(1, n + 1) if x not in (u, v)]
    sigma = [0] * n
    for pos, x in enumerate(others, start=1):
        sigma[x - 1] = pos
    sigma[u - 1], sigma[v - 1] = n, n - 1
    B = _canonical_lift(permute(A, sigma))
    back = list(inverse_permutation(sigma)) + [n + 1]
    B = permute(B, back)
    if unit_sign < 0:
        # diagonal similarity by -1 at w keeps the spectrum and the Jacobian rank
        w = n + 1
        changes = {}
        for j in range(1, w):
            changes[(w, j)] = -B.entry(w, j)
            changes[(j, w)] = -B.entry(j, w)
        B = B.replace(changes)
    return B


def lift_nilpotent_triangle(A: ExactMatrix, u: int, v: int, *, loop: str = "tail",
                            unit_sign: int = 1) -> ExactMatrix:
    """Realization of the triangle extension built from ``A``.

    Tail form: ``B_uu = 0``, ``B_ww = A_uu``, ``B_wv = 1`` and
    ``B_uw = A_uv * A_uu``.  ``unit_sign = -1`` negates the new arcs so the
    unit arc can carry a ``-`` label.  If ``A`` is nilpotent and the two
    conditions hold, ``B`` is nilpotent.
    """
    if loop == "head":
        return _tail_lift(A.transpose(), v, u, unit_sign).transpose()
    return _tail_lift(A, u, v, unit_sign)


def lift_ambstar(A: ExactMatrix, u: int, v: int, variable_on: str = "uw") -> ExactMatrix:
    """Append ``w`` with 0 on the variable arc and 1 on the other."""
    n = A.order
    _check_vertices(n, u, v)
    B = _pad(A)
    w = n + 1
    if variable_on == "uw":
        B[w - 1][v - 1] = 1
    else:
        B[u - 1][w - 1] = 1
    return ExactMatrix.from_rows(B)


def _unit_sign(B: Pattern, spec: ExtensionSpec) -> int:
    w = B.order
    arc = (w, spec.v) if spec.loop == "tail" else (spec.u, w)
    return -1 if B.entry(*arc) is Entry.MINUS else 1


def lift_for(spec: ExtensionSpec, B: Pattern, A: ExactMatrix) -> ExactMatrix:
    if spec.kind == AMBSTAR:
        return lift_ambstar(A, spec.u, spec.v, spec.variable_on)
    return lift_nilpotent_triangle(A, spec.u, spec.v, loop=spec.loop,
                                   unit_sign=_unit_sign(B, spec))


# ---------------------------------------------------------------------------
# polynomial identities

@dataclass(frozen=True)
class ExtensionIdentity:
    """Quotients ``S_r`` (r = 3..n+1) of ``p_Y - z p_X`` by the divisor.

    For triangle steps the divisor is ``x_{m+1} - d*k`` with ``d`` the
    variable at the arc and ``k`` the variable of the moved loop; for ⊛ steps
    it is ``x_{m+1}`` and ``d``, ``k`` are None.  Variable indices are 0-based.
    """

    order: int
    S: dict
    new_var: int
    d: int | None = None
    k: int | None = None

    @property
    def constant(self) -> MultivarPoly:
        return self.S[self.order + 1]


def _symbolic_transpose(X: SymbolicMatrix) -> SymbolicMatrix:
    return SymbolicMatrix(tuple(zip(*X.rows)), tuple((j, i) for i, j in X.placement))


def _quotients(X: SymbolicMatrix, Y: SymbolicMatrix, divisor: MultivarPoly) -> dict:
    n = X.order
    pX = char_poly_symbolic(X).coeffs
    pY = char_poly_symbolic(Y).coeffs
    S = {}
    for r in range(1, n + 2):
        diff = pY[r - 1] - (pX[r - 1] if r <= n else MultivarPoly())
        S[r] = diff.divide_exact(divisor)
    for r in (1, 2):
        if S[r]:
            raise IdentityViolation(f"quotient term S_{r} = {S[r]} should vanish",
                                    remainder=S[r])
    return {r: S[r] for r in range(3, n + 2)}


def _extended_symbolic(X: SymbolicMatrix, changes: dict, new_pos) -> tuple[SymbolicMatrix, int]:
    """Grow X by one row/column, apply ``changes`` and put a new variable at new_pos."""
    n = X.order
    rows = [list(r) + [0] for r in X.rows]
    rows.append([0] * (n + 1))
    for (i, j), e in changes.items():
        rows[i - 1][j - 1] = e
    m = X.num_vars
    rows[new_pos[0] - 1][new_pos[1] - 1] = Var(m)
    placement = [None] * (m + 1)
    for i, r in enumerate(rows, start=1):
        for j, e in enumerate(r, start=1):
            if isinstance(e, Var):
                placement[e.index] = (i, j)
    return SymbolicMatrix(tuple(tuple(r) for r in rows), tuple(placement)), m


def verify_triangle_identity(X: SymbolicMatrix, u: int, v: int, *,
                             loop: str = "tail") -> ExtensionIdentity:
    """Check ``p_Y = z p_X + sum_r S_r (x_{m+1} - d k) z^(n+1-r)`` exactly.

    ``Y`` moves the loop variable ``k`` from (u,u) to (w,w), puts the new
    variable on (u,w) and the constant 1 on (w,v).  Raises
    :class:`IdentityViolation` if the division leaves a remainder.
    """
    if loop == "head":
        return verify_triangle_identity(_symbolic_transpose(X), v, u)
    n = X.order
    _check_vertices(n, u, v)
    k = X.var_at(u, u)
    d = X.var_at(u, v)
    if k is None or d is None:
        raise PreconditionError("the loop and the arc must both carry variables")
    w = n + 1
    Y, new = _extended_symbolic(X, {(u, u): 0, (w, w): Var(k), (w, v): 1}, (u, w))
    divisor = MultivarPoly.var(new) - MultivarPoly.var(d) * MultivarPoly.var(k)
    S = _quotients(X, Y, divisor)
    for r, s in S.items():
        if {d, k} & s.variables():
            raise IdentityViolation(f"S_{r} depends on the loop or arc variable", remainder=s)
    return ExtensionIdentity(n, S, new, d, k)


def symbolic_minor_det(X: SymbolicMatrix, u: int, v: int) -> MultivarPoly:
    grid = [[X.entry_poly(i, j) for j in range(1, X.order + 1) if j != v]
            for i in range(1, X.order + 1) if i != u]
    if not grid:
        return MultivarPoly.const(1)
    return det_expand(grid, zero=MultivarPoly())


def verify_ambstar_identity(X: SymbolicMatrix, u: int, v: int, *,
                            variable_on: str = "uw") -> ExtensionIdentity:
    """Check ``p_Y = z p_X + x_{m+1} * (sum_r S_r z^(n+1-r))`` exactly.

    The constant quotient ``S_{n+1}`` must equal ``(-1)^(n+u+v) det X(u,v)``
    (the sign comes from the ``(-1)^n`` in the constant coefficient of a
    degree n+1 characteristic polynomial and the cofactor sign).
    """
    n = X.order
    _check_vertices(n, u, v)
    w = n + 1
    if variable_on == "uw":
        Y, new = _extended_symbolic(X, {(w, v): 1}, (u, w))
    else:
        Y, new = _extended_symbolic(X, {(u, w): 1}, (w, v))
    S = _quotients(X, Y, MultivarPoly.var(new))
    minor = symbolic_minor_det(X, u, v)
    expected = minor if (n + u + v) % 2 == 0 else -minor
    if S[n + 1] != expected:
        raise IdentityViolation("constant quotient differs from the signed minor determinant",
                                remainder=S[n + 1] - expected)
    return ExtensionIdentity(n, S, new)


@lru_cache(maxsize=128)
def _identity_for(P: Pattern, spec: ExtensionSpec) -> ExtensionIdentity:
    X = SymbolicMatrix.from_pattern(P)
    if spec.kind == AMBSTAR:
        return verify_ambstar_identity(X, spec.u, spec.v, variable_on=spec.variable_on)
    return verify_triangle_identity(X, spec.u, spec.v, loop=spec.loop)


def identity_for(P: Pattern, spec: ExtensionSpec) -> ExtensionIdentity:
    """The exact identity for extending pattern ``P`` by ``spec`` (cached)."""
    return _identity_for(P, spec)


# ---------------------------------------------------------------------------
# certified extension

def _require_verified(cert):
    if cert.status is not Status.VERIFIED:
        raise PreconditionError("input certificate is not VERIFIED")
    if cert.realization is None:
        raise PreconditionError("input certificate carries no realization")


def extend_certified(cert: SapCertificate, spec: ExtensionSpec) -> SapCertificate:
    """Extend a verified certificate by one step and re-certify from scratch.

    When the conditions fail the returned certificate is REJECTED with
    ``failed_check="conditions"`` and an INCONCLUSIVE_SAP note.
    """
    _require_verified(cert)
    P, A = cert.pattern, cert.realization
    B = extend_pattern(P, spec)
    report = check_conditions(P, A, spec)
    chain = tuple(cert.chain) + (spec,)
    if not report.overall:
        return SapCertificate(B, None, tuple(B.nonzero_positions()), 0, Status.REJECTED,
                              note=report.render(), failed_check="conditions",
                              conditions=(report,), chain=chain, base=(P, A))
    identity_for(P, spec)
    lifted = lift_for(spec, B, A)
    new = certify_sap(B, lifted, strict=False)
    return new.with_provenance(conditions=(report,), chain=chain)


def run_chain(seed: SapCertificate, script: Sequence[ExtensionSpec], *, extend=None) -> list:
    """Fold ``extend`` (default :func:`extend_certified`) over ``script``.

    Stops after the first non-VERIFIED certificate; the returned list starts
    with ``seed`` and includes that last certificate.
    """
    extend = extend or extend_certified
    _require_verified(seed)
    out = [seed]
    for spec in script:
        nxt = extend(out[-1], spec)
        out.append(nxt)
        if nxt.status is not Status.VERIFIED:
            break
    return out


__all__ = [
    "AMBSTAR", "ConditionReport", "ExtensionIdentity", "ExtensionSpec", "INCONCLUSIVE",
    "SIGNED_TRIANGLE", "TRIANGLE", "ambstar_extend", "check_condition_i",
    "check_condition_ii", "check_conditions", "extend_certified", "extend_pattern",
    "identity_for", "lift_ambstar", "lift_for", "lift_nilpotent_triangle", "run_chain",
    "signed_triangle_extend", "symbolic_minor_det", "triangle_extend",
    "verify_ambstar_identity", "verify_triangle_identity",
]
