"""Numerical search for exact nilpotent realizations.

The pipeline for one restart:

1. Gauss-Newton with minimum-norm least-squares steps on ``f_1 = ... = f_n = 0``
   from a random start.  A ``*`` or sign entry that drifts to zero is pinned
   at +-1 and the rest re-solved.  Sign entries are parameterized as ``+-exp(t)`` so an
   iterate can never leave its orthant; ``*`` and ``@`` entries are linear.
2. Snapping: free entries are fixed one at a time to short rationals (``+-1``
   first; ``@`` entries try ``0`` first), re-solving after each fix.  A fix
   is kept only if the Jacobian restricted to the remaining free entries keeps
   its numerical rank, so the final point stays a regular point.
3. The remaining entries are polished with high-precision Newton (mpmath) and
   recognized as rationals or, failing that, as elements of one real
   quadratic-or-higher number field (``findpoly`` and ``pslq``).
4. The recognized matrix is checked for nilpotency in exact arithmetic.  Only
   then is the outcome EXACT.
"""

from __future__ import annotations

import enum
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .cycles import SymbolicMatrix, char_poly_numeric, char_poly_symbolic
from .errors import ArgumentError, PreconditionError
from .jacobian import jacobian
from .numbers import AlgebraicField, count_roots
from .pattern import Entry, ExactMatrix, Pattern, PatternKind, membership
from .polynomial import MultivarPoly

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601
STAR_FLOOR = 1e-8


def default_seed() -> int:
    env = os.environ.get("SAPFORGE_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ArgumentError(f"SAPFORGE_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


@dataclass(frozen=True)
class SearchOptions:
    seed: int = field(default_factory=default_seed)
    max_restarts: int = 20
    newton_iterations: int = 100
    tol: float = 1e-12
    denom_bound: int = 10**6
    sign_respecting: bool = True
    max_algebraic_degree: int = 8

    def __post_init__(self):
        if not self.tol > 0:
            raise ArgumentError("tol must be positive")
        for name in ("max_restarts", "newton_iterations", "denom_bound"):
            if getattr(self, name) < 1:
                raise ArgumentError(f"{name} must be >= 1")
        if self.max_algebraic_degree < 1:
            raise ArgumentError("max_algebraic_degree must be >= 1")


class Outcome(str, enum.Enum):
    EXACT = "EXACT"
    NUMERIC_ONLY = "NUMERIC_ONLY"
    FAILED = "FAILED"


@dataclass(frozen=True)
class SearchResult:
    outcome: Outcome
    realization: ExactMatrix | np.ndarray | None
    residual: float
    restarts: int
    note: str = ""

    @property
    def exact(self) -> bool:
        return self.outcome is Outcome.EXACT


def is_nilpotent_exact(A: ExactMatrix) -> bool:
    """True iff every signed cycle sum E_k of ``A`` vanishes exactly."""
    return char_poly_numeric(A).is_monomial()


# ---------------------------------------------------------------------------
# compiled floating evaluation

class _Compiled:
    """Dense float evaluation of a list of multilinear-ish polynomials."""

    def __init__(self, polys: Sequence[MultivarPoly], nvars: int):
        self.nvars = nvars
        self.parts = []
        for p in polys:
            if not p.terms:
                self.parts.append(None)
                continue
            width = max((sum(e for _, e in m) for m in p.terms), default=0) or 1
            idx = np.full((len(p.terms), width), nvars, dtype=np.int64)
            coef = np.empty(len(p.terms))
            for t, (mono, c) in enumerate(p.terms.items()):
                coef[t] = float(c)
                col = 0
                for v, e in mono:
                    for _ in range(e):
                        idx[t, col] = v
                        col += 1
            self.parts.append((coef, idx))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        ext = np.append(x, 1.0)
        out = np.zeros(len(self.parts))
        for i, part in enumerate(self.parts):
            if part is not None:
                coef, idx = part
                out[i] = coef @ np.prod(ext[idx], axis=1)
        return out


class _System:
    """The coefficient system of one pattern, evaluated in floats."""

    def __init__(self, P: Pattern):
        self.P = P
        self.X = SymbolicMatrix.from_pattern(P)
        self.n = P.order
        self.m = self.X.num_vars
        self.labels = [P.entry(i, j) for i, j in self.X.placement]
        self.fs = list(char_poly_symbolic(self.X).coeffs)
        J = jacobian(self.X)
        self.jpolys = [[e for e in row] for row in J.entries]
        self._f = _Compiled(self.fs, self.m)
        self._j = _Compiled([e for row in self.jpolys for e in row], self.m)

    def f(self, x: np.ndarray) -> np.ndarray:
        return self._f(x)

    def jac(self, x: np.ndarray) -> np.ndarray:
        return self._j(x).reshape(self.n, self.m)


def residual(P: Pattern, point: Sequence[float]) -> float:
    """Euclidean norm of (f_1, ..., f_n) at ``point`` in floating point."""
    X = SymbolicMatrix.from_pattern(P)
    if len(point) != X.num_vars:
        raise ArgumentError(f"point has length {len(point)}, expected {X.num_vars}")
    fs = char_poly_symbolic(X).coeffs
    vals = [float(f.evaluate([float(p) for p in point])) for f in fs]
    return float(np.linalg.norm(vals))


def _numeric_rank(M: np.ndarray, rel: float = 1e-8) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel * max(1.0, s[0])))


# ---------------------------------------------------------------------------
# Gauss-Newton in the mixed log/linear parameterization

class _Solver:
    def __init__(self, sys_: _System, opts: SearchOptions):
        self.sys = sys_
        self.opts = opts
        # log-parameterized variables carry their sign here; 0 means linear
        self.logsign = np.zeros(sys_.m)
        if opts.sign_respecting:
            for k, lab in enumerate(sys_.labels):
                if lab is Entry.PLUS:
                    self.logsign[k] = 1.0
                elif lab is Entry.MINUS:
                    self.logsign[k] = -1.0

    def to_x(self, t: np.ndarray) -> np.ndarray:
        x = t.copy()
        lg = self.logsign != 0
        x[lg] = self.logsign[lg] * np.exp(np.clip(t[lg], -50, 50))
        return x

    def to_t(self, x: np.ndarray) -> np.ndarray:
        t = x.astype(float).copy()
        lg = self.logsign != 0
        t[lg] = np.log(np.abs(x[lg]))
        return t

    def solve(self, x0: np.ndarray, free: np.ndarray) -> tuple[np.ndarray, float]:
        """Minimize ||f|| over the ``free`` coordinates, starting from ``x0``."""
        t = self.to_t(x0)
        lg = self.logsign != 0
        x = self.to_x(t)
        r = self.sys.f(x)
        norm = float(np.linalg.norm(r))
        for _ in range(self.opts.newton_iterations):
            if norm < self.opts.tol:
                break
            J = self.sys.jac(x)
            scale = np.where(lg, x, 1.0)
            Jt = (J * scale)[:, free]
            step, *_ = np.linalg.lstsq(Jt, -r, rcond=None)
            lam = 1.0
            improved = False
            for _ in range(30):
                t_new = t.copy()
                t_new[free] += lam * step
                x_new = self.to_x(t_new)
                r_new = self.sys.f(x_new)
                n_new = float(np.linalg.norm(r_new))
                if np.isfinite(n_new) and n_new < norm:
                    t, x, r, norm = t_new, x_new, r_new, n_new
                    improved = True
                    break
                lam /= 2
            if not improved:
                break
        return x, norm


# ---------------------------------------------------------------------------
# snapping to short rationals

def _nice_candidates(value: float, label: Entry) -> list[Fraction]:
    s = 1 if value >= 0 else -1
    cands: list[Fraction] = []
    if label is Entry.AMBSTAR:
        cands.append(Fraction(0))
    cands.append(Fraction(s))
    for den in (1, 2, 4):
        q = Fraction(round(value * den), den)
        cands.append(q)
    out = []
    for q in cands:
        if q in out:
            continue
        if label is not Entry.AMBSTAR and q == 0:
            continue
        if not label.admits(q) and label in (Entry.PLUS, Entry.MINUS):
            continue
        out.append(q)
    return out


def _collapsed(sys_: _System, x: np.ndarray, free: np.ndarray) -> list[int]:
    return [k for k, lab in enumerate(sys_.labels)
            if free[k] and lab is not Entry.AMBSTAR and abs(x[k]) < 1e-6]


def _stars_ok(sys_: _System, x: np.ndarray) -> bool:
    for k, lab in enumerate(sys_.labels):
        if lab is not Entry.AMBSTAR and abs(x[k]) < STAR_FLOOR:
            return False
        if lab in (Entry.PLUS, Entry.MINUS) and not lab.admits(x[k]):
            return False
    return True


# ---------------------------------------------------------------------------
# high-precision polish and recognition

def _mp_polish(sys_: _System, x: np.ndarray, free: np.ndarray, fixed: dict, dps: int):
    free_idx = [k for k in range(sys_.m) if free[k]]
    with mpmath.workdps(dps):
        point = [mpmath.mpf(fixed[k].numerator) / fixed[k].denominator if k in fixed
                 else mpmath.mpf(float(x[k])) for k in range(sys_.m)]
        target = mpmath.mpf(10) ** (-(dps - 10))
        for _ in range(60):
            fv = mpmath.matrix([f.evaluate(point) for f in sys_.fs])
            if mpmath.norm(fv) < target:
                return point, True
            J = mpmath.matrix([[sys_.jpolys[i][k].evaluate(point) for k in free_idx]
                               for i in range(sys_.n)])
            try:
                if J.rows == J.cols:
                    delta = mpmath.lu_solve(J, fv)
                elif J.rows < J.cols:
                    Jt = J.T
                    delta = Jt * mpmath.lu_solve(J * Jt, fv)
                else:
                    delta = mpmath.lu_solve(J.T * J, J.T * fv)
            except (ZeroDivisionError, TypeError):
                # singular system (mpmath signals this inconsistently)
                return point, False
            for t, k in enumerate(free_idx):
                point[k] -= delta[t]
        fv = [f.evaluate(point) for f in sys_.fs]
        return point, mpmath.norm(mpmath.matrix(fv)) < target


def _as_rational(v, bound: int, eps) -> Fraction | None:
    q = Fraction(str(v)).limit_denominator(bound)
    if abs(v - mpmath.mpf(q.numerator) / q.denominator) < eps:
        return q
    return None


def _isolate(minpoly: list[Fraction], y) -> tuple[Fraction, Fraction]:
    c = Fraction(str(y))
    for e in range(6, 60, 2):
        # short decimal endpoints, rounded outward
        scale = 10 ** (e + 1)
        lo = Fraction(math.floor((c - Fraction(1, 10**e)) * scale), scale)
        hi = Fraction(math.ceil((c + Fraction(1, 10**e)) * scale), scale)
        if count_roots(minpoly, lo, hi) == 1:
            return lo, hi
    raise ArithmeticError("could not isolate the recognized root")


def _recognize(values, opts: SearchOptions, dps: int):
    """Exact values for mp numbers: all rational, or all in one number field."""
    eps = mpmath.mpf(10) ** (-(dps // 2))
    exact: list = [None] * len(values)
    pending = []
    for k, v in enumerate(values):
        q = _as_rational(v, opts.denom_bound, eps)
        if q is not None:
            exact[k] = q
        else:
            pending.append(k)
    if not pending:
        return exact
    y = values[pending[0]]
    minpoly = None
    for deg in range(2, opts.max_algebraic_degree + 1):
        try:
            rel = mpmath.findpoly(y, deg, maxcoeff=10**6, maxsteps=20000)
        except ValueError:
            return None
        if rel is not None:
            minpoly = [Fraction(int(c)) for c in reversed(rel)]
            break
    if minpoly is None:
        return None
    try:
        field_ = AlgebraicField(minpoly, _isolate(minpoly, y))
    except (ValueError, ArithmeticError):
        return None
    d = field_.degree
    powers = [mpmath.mpf(1)]
    for _ in range(d - 1):
        powers.append(powers[-1] * y)
    for k in pending:
        v = values[k]
        try:
            rel = mpmath.pslq([v] + powers, maxcoeff=10**8, maxsteps=50000)
        except ValueError:
            return None
        if rel is None or rel[0] == 0:
            return None
        coeffs = [Fraction(-int(c), int(rel[0])) for c in rel[1:]]
        exact[k] = field_.element(coeffs)
    return exact


# ---------------------------------------------------------------------------

def _start_point(sys_: _System, solver: _Solver, rng: np.random.Generator) -> np.ndarray:
    x = np.empty(sys_.m)
    for k, lab in enumerate(sys_.labels):
        if solver.logsign[k] != 0:
            x[k] = solver.logsign[k] * np.exp(rng.normal(0.0, 0.5))
        elif lab is Entry.AMBSTAR:
            x[k] = rng.normal(0.0, 1.0)
        else:
            mag = rng.uniform(0.5, 2.0)
            x[k] = mag if (lab is Entry.PLUS or (lab is not Entry.MINUS and rng.random() < 0.5)) else -mag
    return x


def _attempt(sys_: _System, solver: _Solver, x0: np.ndarray, free0: np.ndarray,
             fixed0: dict, opts: SearchOptions):
    """One restart: returns (outcome, realization, residual, note)."""
    x, norm = solver.solve(x0, free0)
    if norm >= opts.tol:
        return Outcome.FAILED, None, norm, "no convergence"
    # A star entry drifting to zero is pinned at +-1 (its starting sign) and
    # the remaining entries re-solved; a few rounds usually suffice.
    for _ in range(3):
        if _stars_ok(sys_, x):
            break
        free0 = free0.copy()
        fixed0 = dict(fixed0)
        for k in _collapsed(sys_, x, free0):
            fixed0[k] = Fraction(1 if x0[k] >= 0 else -1)
            free0[k] = False
            x[k] = float(fixed0[k])
        x, norm = solver.solve(x, free0)
        if norm >= opts.tol:
            return Outcome.FAILED, None, norm, "no convergence after pinning collapsed entries"
    if not _stars_ok(sys_, x):
        return Outcome.FAILED, None, norm, "star entry collapsed to zero"
    target_rank = _numeric_rank(sys_.jac(x)[:, free0])
    # snapping never touches user-fixed coordinates
    x_s, free, fixed = _snap_with(solver, x, target_rank, free0, fixed0)
    dps = 80
    point, ok = _mp_polish(sys_, x_s, free, fixed, dps)
    if not ok:
        return Outcome.NUMERIC_ONLY, x_s, norm, "high-precision polish failed"
    with mpmath.workdps(dps):
        values = _recognize(point, opts, dps)
    if values is None:
        return Outcome.NUMERIC_ONLY, x_s, norm, "entries not recognized exactly"
    for k, q in fixed.items():
        values[k] = q
    A = SymbolicMatrix.from_pattern(sys_.P).substitute(values)
    if not membership(A, sys_.P):
        return Outcome.NUMERIC_ONLY, x_s, norm, "recognized matrix violates the pattern"
    if not is_nilpotent_exact(A):
        return Outcome.NUMERIC_ONLY, x_s, norm, "recognized matrix is not exactly nilpotent"
    return Outcome.EXACT, A, norm, "exact nilpotent realization"


def _snap_with(solver: _Solver, x, target_rank, free0, fixed0):
    sys_ = solver.sys
    free = free0.copy()
    fixed = dict(fixed0)
    for k in range(sys_.m):
        if int(free.sum()) <= target_rank:
            break
        if not free[k]:
            continue
        for q in _nice_candidates(x[k], sys_.labels[k]):
            if solver.logsign[k] != 0 and q == 0:
                continue
            trial = x.copy()
            trial[k] = float(q)
            trial_free = free.copy()
            trial_free[k] = False
            y, norm = solver.solve(trial, trial_free)
            if norm >= solver.opts.tol or not _stars_ok(sys_, y):
                continue
            if _numeric_rank(sys_.jac(y)[:, trial_free]) != target_rank:
                continue
            x, free = y, trial_free
            fixed[k] = q
            break
    return x, free, fixed


def search_nilpotent(P: Pattern, opts: SearchOptions | None = None, *,
                     start: Sequence[float] | None = None,
                     fixed: dict | None = None) -> SearchResult:
    """Look for an exact nilpotent realization of ``P``.

    ``start`` gives the first restart's initial point (in placement order);
    ``fixed`` pins some placement indices to given rationals for every restart.
    The result of the lowest successful restart index is returned, so the
    outcome depends only on ``P`` and ``opts``.
    """
    opts = opts or SearchOptions()
    if P.kind is PatternKind.MIXED:
        raise PreconditionError("cannot search mixed patterns")
    sys_ = _System(P)
    solver = _Solver(sys_, opts)
    rng = np.random.default_rng(opts.seed)
    fixed0 = {int(k): Fraction(v) for k, v in (fixed or {}).items()}
    for k, q in fixed0.items():
        if not 0 <= k < sys_.m:
            raise ArgumentError(f"fixed index {k} out of range")
        if not sys_.labels[k].admits(q):
            raise ArgumentError(f"fixed value {q} violates entry {sys_.labels[k]}")
    free0 = np.array([k not in fixed0 for k in range(sys_.m)])
    if start is not None and len(start) != sys_.m:
        raise ArgumentError(f"start has length {len(start)}, expected {sys_.m}")

    best: SearchResult | None = None
    for restart in range(opts.max_restarts):
        if restart == 0 and start is not None:
            x0 = np.array([float(s) for s in start])
        else:
            x0 = _start_point(sys_, solver, rng)
        for k, q in fixed0.items():
            x0[k] = float(q)
        if np.any(solver.logsign * x0 < 0) or np.any((solver.logsign != 0) & (x0 == 0)):
            continue
        outcome, A, norm, note = _attempt(sys_, solver, x0, free0, fixed0, opts)
        log.debug("restart %d: %s (%s)", restart, outcome.value, note)
        if outcome is Outcome.EXACT:
            assert is_nilpotent_exact(A)
            return SearchResult(outcome, A, 0.0, restart + 1, note)
        if outcome is Outcome.NUMERIC_ONLY and best is None:
            best = SearchResult(outcome, A, norm, restart + 1, note)
    if best is not None:
        return SearchResult(best.outcome, best.realization, best.residual,
                            opts.max_restarts, best.note)
    return SearchResult(Outcome.FAILED, None, float("inf"), opts.max_restarts,
                        "no nilpotent realization found")


def superpattern_realization(P: Pattern, A: ExactMatrix, Q: Pattern,
                             eps: Fraction = Fraction(1, 1000),
                             opts: SearchOptions | None = None) -> SearchResult:
    """Nilpotent realization of a superpattern ``Q`` of ``P`` near ``A``.

    Every entry that ``Q`` adds is pinned to ``+-eps`` (sign chosen to fit its
    label) and the search starts from ``A``.  When ``A`` has a full-rank
    Jacobian a nearby nilpotent point exists; small pinned values make for
    large denominators, hence the generous default bound.
    """
    from .pattern import superpattern_of

    if not superpattern_of(Q, P):
        raise ArgumentError("Q is not a superpattern of P")
    opts = opts or SearchOptions(denom_bound=10**12)
    start, fixed = [], {}
    for k, (i, j) in enumerate(Q.nonzero_positions()):
        if P.entry(i, j).is_zero:
            fixed[k] = eps if Q.entry(i, j).admits(eps) else -eps
            start.append(float(fixed[k]))
        else:
            start.append(float(A.entry(i, j)))
    return search_nilpotent(Q, opts, start=start, fixed=fixed)


__all__ = ["Outcome", "SearchOptions", "SearchResult", "is_nilpotent_exact",
           "residual", "search_nilpotent", "superpattern_realization"]
