"""Sparse multivariate polynomials with rational coefficients.

Variables are identified by nonnegative integer indices (index ``k`` prints
as ``x{k+1}``).  A monomial is a tuple of ``(var, exponent)`` pairs sorted by
variable; the empty tuple is the constant monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import IdentityViolation

Monomial = tuple


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial):
    """``a / b`` if ``b`` divides ``a``, else None."""
    d = dict(a)
    for v, e in b:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


class MultivarPoly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c != 0:
                    clean[tuple(mono)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "MultivarPoly":
        return cls()

    @classmethod
    def const(cls, c) -> "MultivarPoly":
        return cls({(): c})

    @classmethod
    def var(cls, k: int) -> "MultivarPoly":
        return cls({((k, 1),): 1})

    @classmethod
    def _raw(cls, terms: dict) -> "MultivarPoly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def variables(self) -> set[int]:
        return {v for mono in self.terms for v, _ in mono}

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return all(not mono for mono in self.terms)

    def degree(self, var: int | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e for _, e in mono) for mono in self.terms)
        return max(dict(mono).get(var, 0) for mono in self.terms)

    def __len__(self):
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(x) -> "MultivarPoly":
        if isinstance(x, MultivarPoly):
            return x
        return MultivarPoly.const(x)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for mono, c in o.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MultivarPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultivarPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultivarPoly):
            c = Fraction(other)
            if c == 0:
                return MultivarPoly()
            return MultivarPoly._raw({m: v * c for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MultivarPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MultivarPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultivarPoly):
            return self.terms == other.terms
        try:
            return self.terms == MultivarPoly.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and evaluation ---------------------------------------------
    def derivative(self, var: int) -> "MultivarPoly":
        out = {}
        for mono, c in self.terms.items():
            d = dict(mono)
            e = d.get(var, 0)
            if e == 0:
                continue
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            out[tuple(sorted(d.items()))] = c * e
        return MultivarPoly._raw(out)

    def evaluate(self, point):
        """Evaluate at ``point`` (sequence or mapping indexed by variable).

        Works for any scalar type with ``+`` and ``*``: exact rationals,
        algebraic numbers, floats, mpmath numbers.
        """
        total = 0
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                x = point[v]
                t = t * (x if e == 1 else x ** e)
            total = total + t
        return total

    def substitute(self, values: Mapping[int, object]) -> "MultivarPoly":
        """Replace some variables by constants or polynomials."""
        out = MultivarPoly()
        for mono, c in self.terms.items():
            term = MultivarPoly._raw({(): c})
            rest = []
            for v, e in mono:
                if v in values:
                    val = values[v]
                    factor = val if isinstance(val, MultivarPoly) else MultivarPoly.const(val)
                    for _ in range(e):
                        term = term * factor
                else:
                    rest.append((v, e))
            if rest:
                term = term * MultivarPoly._raw({tuple(rest): Fraction(1)})
            out = out + term
        return out

    # -- division ------------------------------------------------------------
    def _leading(self, nvars: int):
        def key(mono):
            dense = [0] * nvars
            for v, e in mono:
                dense[v] = e
            return tuple(dense)

        mono = max(self.terms, key=key)
        return mono, self.terms[mono]

    def divide_exact(self, divisor: "MultivarPoly") -> "MultivarPoly":
        """Exact quotient ``self / divisor``.

        Uses the division algorithm under lex order; with a single divisor
        the remainder vanishes exactly when the divisor divides ``self``.
        Raises :class:`IdentityViolation` otherwise.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        nvars = 1 + max(self.variables() | divisor.variables() | {0})
        lead_m, lead_c = divisor._leading(nvars)
        rem = MultivarPoly._raw(dict(self.terms))
        quot: dict = {}
        leftover: dict = {}
        while rem.terms:
            m, c = rem._leading(nvars)
            q = _mono_div(m, lead_m)
            if q is None:
                leftover[m] = c
                del rem.terms[m]
                continue
            qc = c / lead_c
            quot[q] = quot.get(q, 0) + qc
            rem = rem - MultivarPoly._raw({q: qc}) * divisor
        if leftover:
            raise IdentityViolation("polynomial division is not exact",
                                    remainder=MultivarPoly(leftover))
        return MultivarPoly(quot)

    # -- display ---------------------------------------------------------------
    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[mono]
            vs = "*".join(f"x{v + 1}" + (f"^{e}" if e > 1 else "") for v, e in mono)
            if not vs:
                parts.append(str(c))
            elif c == 1:
                parts.append(vs)
            elif c == -1:
                parts.append("-" + vs)
            else:
                parts.append(f"{c}*{vs}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_sum(polys: Iterable[MultivarPoly]) -> MultivarPoly:
    out: dict = {}
    for p in polys:
        for mono, c in p.terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
    return MultivarPoly._raw(out)
