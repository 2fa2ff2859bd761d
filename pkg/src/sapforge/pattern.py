"""Patterns, exact matrices and digraphs.

All vertex and entry indices in the public API are 1-based.  Storage is a
tuple of row tuples, so every value here is immutable and hashable.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ArgumentError, DimensionError, ParseError
from .numbers import Exact, as_exact, sign


class Entry(enum.Enum):
    ZERO = "0"
    PLUS = "+"
    MINUS = "-"
    STAR = "*"
    AMBSTAR = "@"

    @classmethod
    def parse(cls, token: str) -> "Entry":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown pattern entry {token!r}") from None

    @property
    def is_zero(self) -> bool:
        return self is Entry.ZERO

    def admits(self, value) -> bool:
        """Whether a real entry ``value`` is allowed at a position with this label."""
        if self is Entry.ZERO:
            return value == 0
        if self is Entry.PLUS:
            return value > 0
        if self is Entry.MINUS:
            return value < 0
        if self is Entry.STAR:
            return value != 0
        return True

    def __str__(self):
        return self.value


SIGN_ENTRIES = frozenset({Entry.ZERO, Entry.PLUS, Entry.MINUS})
NONZERO_ENTRIES = frozenset({Entry.ZERO, Entry.STAR})
ZNZ_ENTRIES = frozenset({Entry.ZERO, Entry.STAR, Entry.AMBSTAR})


class PatternKind(str, enum.Enum):
    SIGN = "sign"
    NONZERO = "nonzero"
    ZERO_NONZERO = "zero-nonzero"
    MIXED = "mixed"


def _as_entry(x) -> Entry:
    return x if isinstance(x, Entry) else Entry.parse(str(x))


@dataclass(frozen=True)
class Pattern:
    """A square grid of :class:`Entry` labels."""

    rows: tuple[tuple[Entry, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_as_entry(e) for e in r) for r in self.rows)
        n = len(rows)
        if n == 0:
            raise DimensionError("pattern order must be positive")
        for r in rows:
            if len(r) != n:
                raise DimensionError("pattern must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Pattern":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_text(cls, text: str) -> "Pattern":
        """Parse the whitespace-separated grid format (``#`` starts a comment line)."""
        rows: list[list[Entry]] = []
        first_line = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if first_line is None:
                first_line = lineno
            row = []
            col = 0
            for tok_start, tok in _tokens(raw):
                col += 1
                try:
                    row.append(Entry.parse(tok))
                except ValueError:
                    raise ParseError(f"bad entry {tok!r}; expected one of 0 + - * @",
                                     lineno, tok_start + 1) from None
            if rows and len(row) != len(rows[0]):
                raise ParseError(f"row has {len(row)} entries, expected {len(rows[0])}",
                                 lineno, None)
            rows.append(row)
        if not rows:
            raise ParseError("empty pattern", 1, None)
        if len(rows) != len(rows[0]):
            raise ParseError(f"pattern has {len(rows)} rows but {len(rows[0])} columns",
                             first_line, None)
        return cls.from_rows(rows)

    def to_text(self) -> str:
        return "".join(" ".join(e.value for e in r) + "\n" for r in self.rows)

    @property
    def order(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Entry:
        return self.rows[i - 1][j - 1]

    def positions(self) -> Iterator[tuple[int, int, Entry]]:
        for i, r in enumerate(self.rows, start=1):
            for j, e in enumerate(r, start=1):
                yield i, j, e

    def nonzero_positions(self) -> list[tuple[int, int]]:
        """Row-major list of 1-based positions whose label is not zero."""
        return [(i, j) for i, j, e in self.positions() if not e.is_zero]

    @cached_property
    def kind(self) -> PatternKind:
        # The all-zero grid fits every kind; report the first in this order.
        labels = {e for r in self.rows for e in r}
        if labels <= SIGN_ENTRIES:
            return PatternKind.SIGN
        if labels <= NONZERO_ENTRIES:
            return PatternKind.NONZERO
        if labels <= ZNZ_ENTRIES:
            return PatternKind.ZERO_NONZERO
        return PatternKind.MIXED

    def is_zero_nonzero(self) -> bool:
        """True for patterns over {0, *, @} (nonzero patterns included)."""
        return all(e in ZNZ_ENTRIES for r in self.rows for e in r)

    def replace(self, changes: dict) -> "Pattern":
        rows = [list(r) for r in self.rows]
        for (i, j), e in changes.items():
            rows[i - 1][j - 1] = _as_entry(e)
        return Pattern.from_rows(rows)

    def __str__(self):
        return self.to_text().rstrip("\n")


def _tokens(line: str):
    i = 0
    n = len(line)
    while i < n:
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not line[j].isspace():
            j += 1
        yield i, line[i:j]
        i = j


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of exact scalars.

    Entries are Fractions (reduced, positive denominator by construction) or
    elements of one real algebraic field.
    """

    rows: tuple[tuple[Exact, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_exact(x) for x in r) for r in self.rows)
        n = len(rows)
        if n == 0:
            raise DimensionError("matrix order must be positive")
        for r in rows:
            if len(r) != n:
                raise DimensionError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows) -> "ExactMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, n: int) -> "ExactMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_text(cls, text: str) -> "ExactMatrix":
        """Rows of whitespace-separated rationals such as ``1 -1/2 0``."""
        rows = []
        first_line = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if first_line is None:
                first_line = lineno
            row = []
            for start, tok in _tokens(raw):
                try:
                    row.append(as_exact(tok))
                except ValueError:
                    raise ParseError(f"bad rational {tok!r}", lineno, start + 1) from None
            if rows and len(row) != len(rows[0]):
                raise ParseError(f"row has {len(row)} entries, expected {len(rows[0])}",
                                 lineno, None)
            rows.append(row)
        if not rows:
            raise ParseError("empty matrix", 1, None)
        if len(rows) != len(rows[0]):
            raise ParseError("matrix is not square", first_line, None)
        return cls.from_rows(rows)

    def to_text(self) -> str:
        from .numbers import format_rational

        out = []
        for r in self.rows:
            out.append(" ".join(format_rational(x) if not hasattr(x, "field") else repr(x)
                                for x in r))
        return "\n".join(out) + "\n"

    @property
    def order(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int):
        return self.rows[i - 1][j - 1]

    def replace(self, changes: dict) -> "ExactMatrix":
        rows = [list(r) for r in self.rows]
        for (i, j), x in changes.items():
            rows[i - 1][j - 1] = x
        return ExactMatrix.from_rows(rows)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.rows)))

    def minor(self, row: int, col: int) -> list[list]:
        """The grid with 1-based ``row`` and ``col`` deleted."""
        return [[x for j, x in enumerate(r, start=1) if j != col]
                for i, r in enumerate(self.rows, start=1) if i != row]

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self.rows], dtype=float)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        n = self.order
        if other.order != n:
            raise DimensionError("order mismatch in matrix product")
        cols = list(zip(*other.rows))
        return ExactMatrix(tuple(tuple(sum((a * b for a, b in zip(r, c)), 0) for c in cols)
                                 for r in self.rows))

    def __str__(self):
        return self.to_text().rstrip("\n")


RationalMatrix = ExactMatrix


@dataclass(frozen=True)
class Digraph:
    """Vertices 1..n and a set of arcs; loops allowed."""

    n: int
    arcs: frozenset

    def __post_init__(self):
        arcs = frozenset((int(i), int(j)) for i, j in self.arcs)
        for i, j in arcs:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ArgumentError(f"arc {(i, j)} out of range 1..{self.n}")
        object.__setattr__(self, "arcs", arcs)

    def has_arc(self, i: int, j: int) -> bool:
        return (i, j) in self.arcs

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        out = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.arcs:
            out[i].append(j)
        return {v: tuple(sorted(s)) for v, s in out.items()}

    def loops(self) -> list[int]:
        return sorted(i for i, j in self.arcs if i == j)

    def without_arc(self, i: int, j: int) -> "Digraph":
        return Digraph(self.n, self.arcs - {(i, j)})

    def reversed(self) -> "Digraph":
        return Digraph(self.n, frozenset((j, i) for i, j in self.arcs))

    def reachable_from(self, v: int) -> set[int]:
        seen = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for y in self.successors[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def strong_component(self, v: int) -> frozenset[int]:
        fwd = self.reachable_from(v)
        back = self.reversed().reachable_from(v)
        return frozenset(fwd & back)


def _check_orders(a, b):
    if a.order != b.order:
        raise DimensionError(f"order mismatch: {a.order} vs {b.order}")


def membership(A: ExactMatrix, P: Pattern) -> bool:
    """True iff the exact matrix ``A`` is a realization of ``P``."""
    _check_orders(A, P)
    return all(e.admits(a)
               for ra, rp in zip(A.rows, P.rows)
               for a, e in zip(ra, rp))


def superpattern_of(B: Pattern, A: Pattern) -> bool:
    """True iff every nonzero entry of ``A`` is repeated in ``B``."""
    _check_orders(A, B)
    return all(ea.is_zero or ea is eb
               for ra, rb in zip(A.rows, B.rows)
               for ea, eb in zip(ra, rb))


def digraph_of(P) -> Digraph:
    """Digraph of a pattern or an exact matrix (arc wherever the entry is nonzero)."""
    arcs = set()
    for i, r in enumerate(P.rows, start=1):
        for j, e in enumerate(r, start=1):
            nonzero = not e.is_zero if isinstance(e, Entry) else e != 0
            if nonzero:
                arcs.add((i, j))
    return Digraph(len(P.rows), frozenset(arcs))


def transpose(P: Pattern) -> Pattern:
    return Pattern(tuple(zip(*P.rows)))


def _check_perm(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise ArgumentError(f"not a permutation of 1..{n}: {sigma}")
    return sigma


def permute(P, sigma: Sequence[int]):
    """Relabel vertex ``i`` as ``sigma[i-1]`` (works for patterns and matrices).

    The result ``Q`` satisfies ``Q[sigma(i), sigma(j)] == P[i, j]``.
    """
    n = P.order
    sigma = _check_perm(sigma, n)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows[sigma[i] - 1][sigma[j] - 1] = P.rows[i][j]
    return type(P).from_rows(rows)


def inverse_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    sigma = _check_perm(sigma, len(sigma))
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


def sign_label(x) -> Entry:
    s = sign(x)
    return Entry.PLUS if s > 0 else Entry.MINUS if s < 0 else Entry.ZERO
