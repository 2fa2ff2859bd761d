"""Exact linear algebra over Q (or a real algebraic field).

Rank and determinant use fraction-free (Bareiss) elimination: every update
``(p*a - b*c) / prev`` is an exact division, so no tolerance is ever used.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError


@dataclass(frozen=True)
class RankResult:
    rank: int
    rows: tuple[int, ...]  # 0-based original row indices of the pivots
    cols: tuple[int, ...]  # 0-based pivot columns

    def __int__(self):
        return self.rank


def _grid(M) -> list[list]:
    rows = M.rows if hasattr(M, "rows") else M
    return [list(r) for r in rows]


def bareiss_rank(M) -> RankResult:
    """Rank of an exact grid plus a nonsingular witness minor.

    The witness minor is the submatrix on the returned pivot rows and
    pivot columns; it has nonzero determinant.
    """
    a = _grid(M)
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    order = list(range(nrows))
    prev = Fraction(1)
    r = 0
    piv_cols = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            order[r], order[p] = order[p], order[r]
        pivot = a[r][c]
        for i in range(r + 1, nrows):
            lead = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c + 1, ncols):
                row_i[j] = (pivot * row_i[j] - lead * row_r[j]) / prev
            row_i[c] = 0
        prev = pivot
        piv_cols.append(c)
        r += 1
    return RankResult(r, tuple(sorted(order[:r])), tuple(piv_cols))


def rank_exact(M) -> int:
    """Rank over the rationals; no tolerance involved."""
    return bareiss_rank(M).rank


def det_exact(M):
    """Determinant by Bareiss elimination (exact, square input)."""
    a = _grid(M)
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    sgn = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            a[k], a[p] = a[p], a[k]
            sgn = -sgn
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] if sgn > 0 else -a[n - 1][n - 1]


def det_expand(M: Sequence[Sequence], zero=0):
    """Determinant by row expansion memoized on the remaining column set.

    Only needs ``+``, ``-`` and ``*`` on the entries, so it serves symbolic
    grids (polynomial entries) as well.  Zero entries are skipped, which keeps
    sparse grids cheap.
    """
    a = [list(r) for r in M]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant needs a square matrix")
    memo: dict[int, object] = {}

    def rec(row: int, cols: int):
        if row == n:
            return None  # empty product
        if cols in memo:
            return memo[cols]
        total = zero
        pos = 0
        for c in range(n):
            if not (cols >> c) & 1:
                continue
            e = a[row][c]
            if e != 0:
                sub = rec(row + 1, cols & ~(1 << c))
                if sub is not None or row + 1 == n:
                    term = e if sub is None else e * sub
                    total = total + term if pos % 2 == 0 else total - term
            pos += 1
        memo[cols] = total
        return total

    if n == 0:
        return 1
    return rec(0, (1 << n) - 1)
