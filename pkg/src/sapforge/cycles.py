"""Cycles of a digraph and characteristic polynomials via signed cycle sums.

The characteristic polynomial of an order-n matrix is

    p(z) = z^n - E_1 z^(n-1) + E_2 z^(n-2) - ... + (-1)^n E_n

where ``E_k`` sums the signed weights of all composite k-cycles.  A simple
cycle of length l carries sign (-1)^(l-1); a composite cycle carries the
product of its parts' signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import ArgumentError
from .numbers import as_exact
from .pattern import Digraph, ExactMatrix, Pattern, digraph_of
from .polynomial import MultivarPoly


@dataclass(frozen=True, order=True)
class SimpleCycle:
    """Vertex sequence of a simple cycle, minimum vertex first."""

    vertices: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        vs = self.vertices
        return tuple((vs[t], vs[(t + 1) % len(vs)]) for t in range(len(vs)))

    @property
    def sign(self) -> int:
        return -1 if self.length % 2 == 0 else 1

    def sort_key(self):
        return (self.length, self.vertices)

    def __repr__(self):
        return "(" + ",".join(map(str, self.vertices)) + ")"


def canonical_rotation(vertices: Sequence[int]) -> tuple[int, ...]:
    vs = tuple(vertices)
    k = vs.index(min(vs))
    return vs[k:] + vs[:k]


@dataclass(frozen=True)
class CompositeCycle:
    """A set of pairwise vertex-disjoint simple cycles."""

    cycles: tuple[SimpleCycle, ...]

    @property
    def weight(self) -> int:
        return sum(c.length for c in self.cycles)

    @property
    def sign(self) -> int:
        s = 1
        for c in self.cycles:
            s *= c.sign
        return s

    @property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple(a for c in self.cycles for a in c.arcs)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for c in self.cycles for v in c.vertices)

    def sort_key(self):
        return (self.weight, tuple(c.sort_key() for c in self.cycles))

    def __repr__(self):
        return "".join(map(repr, self.cycles))


def enumerate_simple_cycles(D: Digraph) -> list[SimpleCycle]:
    """Every simple cycle of ``D`` exactly once, sorted by (length, vertices).

    For each start vertex s, a depth-first search walks only through vertices
    larger than s; each cycle is therefore found once, from its minimum vertex.
    """
    return list(_simple_cycles(D))


@lru_cache(maxsize=256)
def _simple_cycles(D: Digraph) -> tuple[SimpleCycle, ...]:
    succ = D.successors
    found = []
    for s in range(1, D.n + 1):
        path = [s]
        on_path = {s}
        stack = [iter(succ[s])]
        while stack:
            for y in stack[-1]:
                if y == s:
                    found.append(SimpleCycle(tuple(path)))
                elif y > s and y not in on_path:
                    path.append(y)
                    on_path.add(y)
                    stack.append(iter(succ[y]))
                    break
            else:
                stack.pop()
                on_path.discard(path.pop())
    found.sort(key=SimpleCycle.sort_key)
    return tuple(found)


@lru_cache(maxsize=256)
def _composites_by_weight(D: Digraph) -> dict[int, tuple[CompositeCycle, ...]]:
    simple = _simple_cycles(D)
    masks = []
    for c in simple:
        m = 0
        for v in c.vertices:
            m |= 1 << v
        masks.append(m)
    groups: dict[int, list[CompositeCycle]] = {k: [] for k in range(1, D.n + 1)}

    def rec(start: int, used: int, chosen: list[int], weight: int):
        for i in range(start, len(simple)):
            if masks[i] & used:
                continue
            chosen.append(i)
            w = weight + simple[i].length
            groups[w].append(CompositeCycle(tuple(simple[t] for t in chosen)))
            if w < D.n:
                rec(i + 1, used | masks[i], chosen, w)
            chosen.pop()

    rec(0, 0, [], 0)
    return {k: tuple(sorted(v, key=CompositeCycle.sort_key)) for k, v in groups.items()}


def composite_cycles(D: Digraph, k: int) -> list[CompositeCycle]:
    """All composite cycles of ``D`` covering exactly ``k`` vertices."""
    if not 1 <= k <= D.n:
        raise ArgumentError(f"k must lie in 1..{D.n}, got {k}")
    return list(_composites_by_weight(D)[k])


def signed_cycle_sum(A: ExactMatrix, k: int):
    """``E_k``: the sum of all signed composite k-cycle weights of ``A``."""
    D = digraph_of(A)
    if not 1 <= k <= A.order:
        raise ArgumentError(f"k must lie in 1..{A.order}, got {k}")
    rows = A.rows
    total = Fraction(0)
    for cc in _composites_by_weight(D)[k]:
        w = cc.sign
        for i, j in cc.arcs:
            w = w * rows[i - 1][j - 1]
        total = total + w
    return total


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial ``z^n + c_1 z^(n-1) + ... + c_n``.

    ``coeffs`` holds ``c_1..c_n``: exact scalars for a numeric polynomial or
    :class:`MultivarPoly` for a symbolic one.
    """

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def full(self) -> list:
        """All coefficients, highest degree first, leading 1 included."""
        return [Fraction(1)] + list(self.coeffs)

    def is_monomial(self) -> bool:
        """True iff the polynomial is exactly z^n."""
        return all(c == 0 for c in self.coeffs)

    def zero_root_multiplicity(self) -> int:
        m = 0
        for c in reversed(self.coeffs):
            if c != 0:
                break
            m += 1
        return m

    def substitute(self, point) -> "CharPoly":
        return CharPoly(tuple(c.evaluate(point) for c in self.coeffs))

    def __str__(self):
        n = self.order
        parts = [f"z^{n}" if n > 1 else "z"]
        for i, c in enumerate(self.coeffs, start=1):
            if c == 0:
                continue
            p = n - i
            zs = "" if p == 0 else ("z" if p == 1 else f"z^{p}")
            parts.append(f"({c})" + ("*" + zs if zs else ""))
        return " + ".join(parts)


def char_poly_numeric(A: ExactMatrix) -> CharPoly:
    n = A.order
    D = digraph_of(A)
    groups = _composites_by_weight(D)
    rows = A.rows
    coeffs = []
    for k in range(1, n + 1):
        total = Fraction(0)
        for cc in groups[k]:
            w = cc.sign
            for i, j in cc.arcs:
                w = w * rows[i - 1][j - 1]
            total = total + w
        coeffs.append(total if k % 2 == 0 else -total)
    return CharPoly(tuple(coeffs))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int  # 0-based; printed as x{index+1}

    def __repr__(self):
        return f"x{self.index + 1}"


@dataclass(frozen=True)
class SymbolicMatrix:
    """Matrix whose entries are exact constants or variables.

    ``placement[k]`` is the 1-based position of variable ``x_{k+1}``.
    """

    rows: tuple
    placement: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = len(self.rows)
        seen = {}
        rows = []
        for i, r in enumerate(self.rows, start=1):
            if len(r) != n:
                raise ArgumentError("symbolic matrix must be square")
            row = []
            for j, e in enumerate(r, start=1):
                if isinstance(e, Var):
                    if e.index in seen:
                        raise ArgumentError(f"variable {e} placed twice")
                    seen[e.index] = (i, j)
                    row.append(e)
                else:
                    row.append(as_exact(e))
            rows.append(tuple(row))
        placement = tuple(tuple(p) for p in self.placement)
        if len(seen) != len(placement) or any(seen.get(k) != p for k, p in enumerate(placement)):
            raise ArgumentError("placement does not match the variables in the grid")
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "placement", placement)

    @classmethod
    def from_pattern(cls, P: Pattern) -> "SymbolicMatrix":
        """One variable at every nonzero pattern position, numbered row-major."""
        placement = tuple(P.nonzero_positions())
        index = {p: k for k, p in enumerate(placement)}
        rows = tuple(tuple(Var(index[(i, j)]) if (i, j) in index else 0
                           for j in range(1, P.order + 1))
                     for i in range(1, P.order + 1))
        return cls(rows, placement)

    @classmethod
    def from_matrix(cls, A: ExactMatrix, positions) -> "SymbolicMatrix":
        """``A`` with the listed positions replaced by x_1, x_2, ..."""
        placement = tuple(tuple(p) for p in positions)
        index = {p: k for k, p in enumerate(placement)}
        rows = tuple(tuple(Var(index[(i, j)]) if (i, j) in index else A.entry(i, j)
                           for j in range(1, A.order + 1))
                     for i in range(1, A.order + 1))
        return cls(rows, placement)

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def num_vars(self) -> int:
        return len(self.placement)

    def entry(self, i: int, j: int):
        return self.rows[i - 1][j - 1]

    def var_at(self, i: int, j: int) -> int | None:
        e = self.rows[i - 1][j - 1]
        return e.index if isinstance(e, Var) else None

    def digraph(self) -> Digraph:
        arcs = frozenset((i, j) for i, r in enumerate(self.rows, start=1)
                         for j, e in enumerate(r, start=1)
                         if isinstance(e, Var) or e != 0)
        return Digraph(self.order, arcs)

    def entry_poly(self, i: int, j: int) -> MultivarPoly:
        e = self.rows[i - 1][j - 1]
        if isinstance(e, Var):
            return MultivarPoly.var(e.index)
        return MultivarPoly.const(e) if e != 0 else MultivarPoly()

    def substitute(self, point: Sequence) -> ExactMatrix:
        if len(point) != self.num_vars:
            raise ArgumentError(f"point has length {len(point)}, expected {self.num_vars}")
        return ExactMatrix(tuple(tuple(point[e.index] if isinstance(e, Var) else e for e in r)
                                 for r in self.rows))


def char_poly_symbolic(X: SymbolicMatrix) -> CharPoly:
    """Symbolic coefficients ``f_1..f_n`` of ``det(zI - X)`` via the cycle formula."""
    return _char_poly_symbolic(X)


@lru_cache(maxsize=512)
def _char_poly_symbolic(X: SymbolicMatrix) -> CharPoly:
    n = X.order
    groups = _composites_by_weight(X.digraph())
    rows = X.rows
    coeffs = []
    for k in range(1, n + 1):
        acc: dict = {}
        for cc in groups[k]:
            c = Fraction(cc.sign)
            mono: dict = {}
            for i, j in cc.arcs:
                e = rows[i - 1][j - 1]
                if isinstance(e, Var):
                    mono[e.index] = mono.get(e.index, 0) + 1
                else:
                    c *= e
            key = tuple(sorted(mono.items()))
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
        poly = MultivarPoly(acc)
        coeffs.append(poly if k % 2 == 0 else -poly)
    return CharPoly(tuple(coeffs))
