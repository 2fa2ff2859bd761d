"""Exact scalars: rationals and elements of a real algebraic number field.

Realizations are normally rational.  Some patterns (the tridiagonal T_4 and
T_5 among them) admit no rational nilpotent realization at all, so a
realization may instead live in ``Q(alpha)`` for a single real algebraic
``alpha``.  Every exact algorithm in the package is written against the
ordinary arithmetic operators, so ``Fraction`` and ``AlgebraicNumber``
entries can be mixed freely as long as only one field is involved.

Univariate polynomials in this module are coefficient lists, lowest degree
first.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

Exact = Union[Fraction, "AlgebraicNumber"]


def as_exact(x) -> Exact:
    """Coerce ``x`` to an exact scalar.

    Accepts ints, Fractions, ``"num/den"`` strings and AlgebraicNumbers.
    Floats are refused: silently rounding them would defeat certification.
    """
    if isinstance(x, AlgebraicNumber):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot use {type(x).__name__} {x!r} as an exact scalar")


def parse_rational(text: str) -> Fraction:
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def sign(x) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def is_rational(x) -> bool:
    if isinstance(x, AlgebraicNumber):
        return x.is_rational
    return isinstance(x, Rational)


def to_float(x) -> float:
    return float(x)


def common_field(values) -> "AlgebraicField | None":
    """The single algebraic field the values live in, or None if all rational."""
    field = None
    for v in values:
        if isinstance(v, AlgebraicNumber) and not v.is_rational:
            if field is None:
                field = v.field
            elif v.field != field:
                raise ValueError("entries come from different algebraic fields")
    return field


# ---------------------------------------------------------------------------
# univariate helpers over Q

def poly_trim(p: Sequence[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_sub(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                      for i in range(n)])


def poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = poly_trim([Fraction(c) for c in a])
    b = poly_trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = a[:]
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r = poly_trim(r)
    return poly_trim(q), r


def poly_derivative(p):
    return poly_trim([i * c for i, c in enumerate(p)][1:])


def sturm_sequence(p):
    seq = [poly_trim([Fraction(c) for c in p])]
    seq.append(poly_derivative(seq[0]))
    while seq[-1]:
        _, r = poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x) -> int:
    signs = [sign(poly_eval(s, x)) for s in seq if s]
    signs = [s for s in signs if s != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(p, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def _interval_eval(p, lo: Fraction, hi: Fraction):
    rlo = rhi = Fraction(0)
    for c in reversed(p):
        prods = (rlo * lo, rlo * hi, rhi * lo, rhi * hi)
        rlo, rhi = min(prods) + c, max(prods) + c
    return rlo, rhi


# ---------------------------------------------------------------------------

class AlgebraicField:
    """``Q(alpha)`` for a real root ``alpha`` of an irreducible polynomial.

    ``alpha`` is pinned down by a rational isolating interval ``(lo, hi]``
    containing exactly one root of the minimal polynomial.  The interval is
    refined lazily (under a lock) when signs or floats are requested; the
    refinement never changes which root is meant.
    """

    def __init__(self, minpoly: Sequence, interval: Sequence, *, check: bool = True):
        coeffs = poly_trim([Fraction(c) for c in minpoly])
        if len(coeffs) < 3:
            raise ValueError("minimal polynomial must have degree >= 2")
        lead = coeffs[-1]
        self.minpoly = tuple(c / lead for c in coeffs)
        self.degree = len(self.minpoly) - 1
        lo, hi = (Fraction(interval[0]), Fraction(interval[1]))
        if not lo < hi:
            raise ValueError("isolating interval must satisfy lo < hi")
        self.interval = (lo, hi)
        if check:
            if count_roots(self.minpoly, lo, hi) != 1:
                raise ValueError("interval does not isolate exactly one root")
            if not _is_irreducible(self.minpoly):
                raise ValueError("minimal polynomial is reducible over Q")
        self._lock = threading.Lock()
        self._lo, self._hi = lo, hi

    def __eq__(self, other):
        if not isinstance(other, AlgebraicField):
            return NotImplemented
        if self is other:
            return True
        if self.minpoly != other.minpoly:
            return False
        lo = max(self.interval[0], other.interval[0])
        hi = min(self.interval[1], other.interval[1])
        return lo < hi and count_roots(self.minpoly, lo, hi) == 1

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return (f"AlgebraicField(minpoly={[str(c) for c in self.minpoly]}, "
                f"alpha~{self.approx():.12g})")

    @property
    def generator(self) -> "AlgebraicNumber":
        return AlgebraicNumber(self, [0, 1])

    def element(self, coeffs) -> "AlgebraicNumber":
        return AlgebraicNumber(self, coeffs)

    def reduce(self, p: Sequence[Fraction]) -> tuple[Fraction, ...]:
        _, r = poly_divmod(p, self.minpoly)
        r = list(r) + [Fraction(0)] * (self.degree - len(r))
        return tuple(r)

    def _bisect(self, lo, hi):
        mid = (lo + hi) / 2
        # An irreducible polynomial of degree >= 2 has no rational roots.
        if sign(poly_eval(self.minpoly, mid)) == sign(poly_eval(self.minpoly, hi)):
            return lo, mid
        return mid, hi

    def sign_of(self, coeffs: Sequence[Fraction]) -> int:
        p = poly_trim(coeffs)
        if not p:
            return 0
        if len(p) == 1:
            return sign(p[0])
        with self._lock:
            lo, hi = self._lo, self._hi
        for _ in range(4000):
            vlo, vhi = _interval_eval(p, lo, hi)
            if vlo > 0:
                s = 1
                break
            if vhi < 0:
                s = -1
                break
            lo, hi = self._bisect(lo, hi)
        else:  # pragma: no cover - nonzero elements always separate
            raise ArithmeticError("sign refinement did not terminate")
        with self._lock:
            if hi - lo < self._hi - self._lo:
                self._lo, self._hi = lo, hi
        return s

    def approx(self) -> float:
        with self._lock:
            lo, hi = self._lo, self._hi
        while hi - lo > Fraction(1, 2**64) * max(1, abs(hi)):
            lo, hi = self._bisect(lo, hi)
        with self._lock:
            if hi - lo < self._hi - self._lo:
                self._lo, self._hi = lo, hi
        return float((lo + hi) / 2)

    def to_mpf(self, dps: int = 50):
        import mpmath

        with self._lock:
            lo, hi = self._lo, self._hi
        target = Fraction(1, 10 ** (dps + 5))
        while hi - lo > target:
            lo, hi = self._bisect(lo, hi)
        mid = (lo + hi) / 2
        with mpmath.workdps(dps + 10):
            return mpmath.mpf(mid.numerator) / mid.denominator


def _is_irreducible(coeffs) -> bool:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(coeffs))
    return sympy.Poly(expr, x, domain="QQ").is_irreducible


class AlgebraicNumber:
    """An element ``c0 + c1*alpha + ... `` of an :class:`AlgebraicField`."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: AlgebraicField, coeffs):
        self.field = field
        self.coeffs = field.reduce([Fraction(c) for c in coeffs])

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is self.field or other.field == self.field:
                return other
            if other.is_rational:
                return AlgebraicNumber(self.field, [other.coeffs[0]])
            if self.is_rational:
                return None
            raise ValueError("cannot mix elements of different algebraic fields")
        if isinstance(other, Rational) and not isinstance(other, bool):
            return AlgebraicNumber(self.field, [Fraction(other)])
        return NotImplemented

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("element is irrational")
        return self.coeffs[0]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other + self.coeffs[0]
        return AlgebraicNumber(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.field, [-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return -(other - self.coeffs[0])
        return AlgebraicNumber(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other * self.coeffs[0]
        return AlgebraicNumber(self.field, poly_mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        a = poly_trim(self.coeffs)
        if not a:
            raise ZeroDivisionError("division by zero in algebraic field")
        # extended Euclid: s*a + t*g = gcd
        r0, r1 = list(self.field.minpoly), a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        if len(r0) != 1:  # pragma: no cover - minpoly is irreducible
            raise ZeroDivisionError("element is a zero divisor")
        inv = [c / r0[0] for c in s0]
        return AlgebraicNumber(self.field, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return self.coeffs[0] / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = AlgebraicNumber(self.field, [1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        return self.field.sign_of(self.coeffs)

    def _cmp(self, other):
        d = self - other
        if d is NotImplemented:
            return None
        return d.sign() if isinstance(d, AlgebraicNumber) else sign(d)

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.field is self.field or other.field == self.field:
                return self.coeffs == other.coeffs
            return self.is_rational and other.is_rational and self.coeffs[0] == other.coeffs[0]
        if isinstance(other, Rational):
            return self.is_rational and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeffs[0])
        return hash((self.field.minpoly, self.coeffs))

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        if self.is_rational:
            return float(self.coeffs[0])
        return float(poly_eval(self.coeffs, self.field.approx()))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if i == 0 else f"{c}*a" + (f"^{i}" if i > 1 else ""))
        return "(" + (" + ".join(terms) or "0") + ")"
