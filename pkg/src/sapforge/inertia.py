"""Refined inertia and certification of inertially arbitrary patterns.

Eigenvalues come from LAPACK in double precision and are diagnostic only.
Two things are exact: the number ``c1`` of zero eigenvalues (trailing zero
coefficients of the characteristic polynomial), and the purely imaginary
check used for VERIFIED certificates, which needs the characteristic
polynomial to factor over Q as ``z^c1 * prod(z^2 + q_j)`` with every
``q_j > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .cycles import CharPoly, char_poly_numeric
from .errors import DimensionError, IdentityViolation, PreconditionError
from .extensions import (ExtensionSpec, check_conditions, extend_pattern, identity_for,
                         lift_for)
from .jacobian import Status, check_certifiable, jacobian_check
from .numbers import is_rational
from .pattern import ExactMatrix, Pattern, membership

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class RefinedInertia:
    a: int
    b: int
    c1: int
    c2: int
    numeric_c1: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if min(self.a, self.b, self.c1, self.c2) < 0:
            raise ValueError("inertia counts are nonnegative")

    @property
    def order(self) -> int:
        return self.a + self.b + self.c1 + self.c2

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c1, self.c2)

    def __iter__(self):
        return iter(self.as_tuple())

    def __str__(self):
        return "({},{},{},{})".format(*self.as_tuple())


def refined_inertia(A: ExactMatrix, tol: float = DEFAULT_TOL) -> RefinedInertia:
    """Refined inertia ``(a, b, c1, c2)`` of ``A``.

    The floating eigenvalues are classified by real part against ``tol``.
    The exact zero-root multiplicity of the characteristic polynomial then
    overrides the numeric zero count: that many smallest-modulus eigenvalues
    are taken as the zero eigenvalues and only the rest are classified.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = A.order
    c1 = char_poly_numeric(A).zero_root_multiplicity()
    eig = np.linalg.eigvals(A.to_float())
    numeric_c1 = int(np.sum(np.abs(eig) <= tol))
    rest = eig[np.argsort(np.abs(eig), kind="stable")][c1:]
    a = b = c2 = 0
    for lam in rest:
        if lam.real > tol:
            a += 1
        elif lam.real < -tol:
            b += 1
        elif abs(lam.imag) > tol:
            c2 += 1
        elif lam.real >= 0:
            a += 1
        else:
            b += 1
    assert a + b + c1 + c2 == n
    return RefinedInertia(a, b, c1, c2, numeric_c1)


def inertia(A: ExactMatrix, tol: float = DEFAULT_TOL) -> tuple[int, int, int]:
    ri = refined_inertia(A, tol)
    return (ri.a, ri.b, ri.c1 + ri.c2)


# ---------------------------------------------------------------------------
# exact imaginary-axis check

def _sympy_factor_even_part(coeffs: list[Fraction]):
    """Factor ``h`` with ``g(z) = h(z^2)``; coeffs are for g, highest degree first."""
    import sympy

    y = sympy.Symbol("y")
    deg = len(coeffs) - 1
    h = sum(sympy.Rational(c.numerator, c.denominator) * y ** ((deg - i) // 2)
            for i, c in enumerate(coeffs) if (deg - i) % 2 == 0)
    _, factors = sympy.factor_list(sympy.Poly(h, y, domain="QQ"))
    return [(f.all_coeffs(), mult) for f, mult in factors]


@dataclass(frozen=True)
class ImaginaryCheck:
    """``decided`` is False when the exact test cannot settle the question."""

    decided: bool
    on_axis: bool | None
    note: str


def exact_imaginary_check(cp: CharPoly) -> ImaginaryCheck:
    """Are all nonzero roots purely imaginary, decided over Q when possible?"""
    if not all(is_rational(c) for c in cp.coeffs):
        return ImaginaryCheck(False, None, "characteristic polynomial is not rational")
    # realizations over a number field may still have a rational polynomial
    coeffs = [c.to_fraction() if hasattr(c, "to_fraction") else Fraction(c) for c in cp.coeffs]
    c1 = cp.zero_root_multiplicity()
    g = [Fraction(1)] + coeffs[: cp.order - c1]
    deg = len(g) - 1
    if any(c != 0 for i, c in enumerate(g) if (deg - i) % 2 == 1):
        return ImaginaryCheck(True, False, "odd part is nonzero: some root leaves the imaginary axis")
    if deg == 0:
        return ImaginaryCheck(True, True, "no nonzero eigenvalues")
    factors = _sympy_factor_even_part(g)
    qs = []
    for coeffs, mult in factors:
        if len(coeffs) != 2:
            return ImaginaryCheck(False, None, "even part does not split over Q")
        lead, const = coeffs
        q = Fraction(int(const.p), int(const.q)) / Fraction(int(lead.p), int(lead.q))
        qs.extend([q] * mult)
    if all(q > 0 for q in qs):
        return ImaginaryCheck(True, True, "factors as z^c1 * prod(z^2 + q) with q > 0: "
                              + ", ".join(str(q) for q in qs))
    return ImaginaryCheck(True, False, "a factor z^2 - r with r >= 0 gives real eigenvalues")


@dataclass(frozen=True)
class IapCertificate:
    pattern: Pattern
    realization: ExactMatrix | None
    placement: tuple
    refined_inertia: RefinedInertia | None
    rank: int
    status: Status
    note: str = ""
    failed_check: str | None = None
    witness_minor: tuple | None = None
    conditions: tuple = ()
    chain: tuple = ()
    base: tuple | None = None

    @property
    def order(self) -> int:
        return self.pattern.order

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    def with_provenance(self, conditions=(), chain=(), base=None) -> "IapCertificate":
        return replace(self, conditions=tuple(conditions), chain=tuple(chain), base=base)


def certify_iap(P: Pattern, A: ExactMatrix, *, strict: bool = True,
                tol: float = DEFAULT_TOL) -> IapCertificate:
    """Check ``ri(A) = (0,0,c1,c2)`` with ``c1 >= 2`` and a rank-n Jacobian.

    Checks run in the order membership, inertia, rank.  VERIFIED needs the
    exact factorization test; a pass that rests on floating eigenvalues alone
    is CANDIDATE.
    """
    if A.order != P.order:
        raise DimensionError(f"order mismatch: pattern {P.order}, matrix {A.order}")
    check_certifiable(P)
    placement = tuple(P.nonzero_positions())
    if not membership(A, P):
        if strict:
            raise PreconditionError("realization is not a member of the pattern")
        return IapCertificate(P, A, placement, None, 0, Status.REJECTED,
                              note="realization violates the pattern", failed_check="membership")
    cp = char_poly_numeric(A)
    ri = refined_inertia(A, tol)
    check = exact_imaginary_check(cp)
    reject = lambda note: IapCertificate(P, A, placement, ri, 0, Status.REJECTED,
                                         note=note, failed_check="inertia")
    if check.decided and not check.on_axis:
        return reject(f"refined inertia {ri}: {check.note}")
    if not check.decided and (ri.a or ri.b):
        return reject(f"refined inertia {ri} (floating point): eigenvalues off the imaginary axis")
    if ri.c1 < 2:
        return reject(f"only {ri.c1} zero eigenvalue(s); at least 2 are needed")
    jc = jacobian_check(P, A)
    if jc.rank < P.order:
        return IapCertificate(P, A, placement, ri, jc.rank, Status.REJECTED,
                              note=f"Jacobian rank {jc.rank} < {P.order}", failed_check="rank")
    if check.decided:
        return IapCertificate(P, A, placement, ri, jc.rank, Status.VERIFIED,
                              note=f"refined inertia {ri} certified exactly ({check.note}); "
                                   "every superpattern is inertially arbitrary",
                              witness_minor=jc.witness)
    return IapCertificate(P, A, placement, ri, jc.rank, Status.CANDIDATE,
                          note=f"refined inertia {ri} from floating eigenvalues only "
                               f"({check.note})",
                          witness_minor=jc.witness)


def iap_extend_certified(cert: IapCertificate, spec: ExtensionSpec) -> IapCertificate:
    """Extension step for inertia certificates.

    The lifted realization must satisfy ``p_B(z) = z p_A(z)`` exactly, which
    moves the refined inertia from (0,0,c1,c2) to (0,0,c1+1,c2).
    """
    if cert.status is not Status.VERIFIED or cert.realization is None:
        raise PreconditionError("input certificate is not VERIFIED")
    P, A = cert.pattern, cert.realization
    B = extend_pattern(P, spec)
    report = check_conditions(P, A, spec)
    chain = tuple(cert.chain) + (spec,)
    if not report.overall:
        return IapCertificate(B, None, tuple(B.nonzero_positions()), None, 0, Status.REJECTED,
                              note=report.render(), failed_check="conditions",
                              conditions=(report,), chain=chain, base=(P, A))
    identity_for(P, spec)
    lifted = lift_for(spec, B, A)
    before = char_poly_numeric(A)
    after = char_poly_numeric(lifted)
    if after.coeffs != before.coeffs + (0,):
        raise IdentityViolation("lifted characteristic polynomial is not z * p_A")
    new = certify_iap(B, lifted, strict=False)
    prev = cert.refined_inertia
    expected = (0, 0, prev.c1 + 1, prev.c2)
    if new.refined_inertia is None or new.refined_inertia.as_tuple() != expected:
        raise IdentityViolation(f"refined inertia {new.refined_inertia} is not {expected}")
    return new.with_provenance(conditions=(report,), chain=chain)


__all__ = [
    "DEFAULT_TOL", "IapCertificate", "ImaginaryCheck", "RefinedInertia", "certify_iap",
    "exact_imaginary_check", "iap_extend_certified", "inertia", "refined_inertia",
]
