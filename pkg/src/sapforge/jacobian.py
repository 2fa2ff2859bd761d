"""Jacobian of characteristic-polynomial coefficients and SAP certification."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

from .cycles import SymbolicMatrix, char_poly_numeric, char_poly_symbolic
from .errors import ArgumentError, DimensionError, PreconditionError
from .linalg import bareiss_rank, rank_exact
from .pattern import ExactMatrix, Pattern, PatternKind, membership
from .polynomial import MultivarPoly


class Status(str, enum.Enum):
    VERIFIED = "VERIFIED"
    CANDIDATE = "CANDIDATE"
    REJECTED = "REJECTED"


@dataclass(frozen=True)
class JacobianMatrix:
    """``entries[i][j]`` is the partial derivative of f_{i+1} by x_{j+1}."""

    entries: tuple[tuple[MultivarPoly, ...], ...]
    placement: tuple[tuple[int, int], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.placement)


def jacobian(X: SymbolicMatrix) -> JacobianMatrix:
    return _jacobian(X)


@lru_cache(maxsize=256)
def _jacobian(X: SymbolicMatrix) -> JacobianMatrix:
    fs = char_poly_symbolic(X).coeffs
    m = X.num_vars
    return JacobianMatrix(tuple(tuple(f.derivative(j) for j in range(m)) for f in fs),
                          X.placement)


def evaluate_jacobian(J: JacobianMatrix, point: Sequence) -> list[list]:
    if len(point) != len(J.placement):
        raise ArgumentError(f"point has length {len(point)}, expected {len(J.placement)}")
    return [[e.evaluate(point) for e in row] for row in J.entries]


def realization_point(A: ExactMatrix, placement) -> list:
    return [A.entry(i, j) for i, j in placement]


@dataclass(frozen=True)
class SapCertificate:
    """Outcome of the nilpotent-Jacobian test for one pattern.

    ``failed_check`` names the first failing check (membership, nilpotency,
    rank, or conditions for extension steps) when the status is REJECTED.
    ``witness_minor`` lists 1-based Jacobian rows and columns of a
    nonsingular n x n minor.
    """

    pattern: Pattern
    realization: ExactMatrix | None
    placement: tuple[tuple[int, int], ...]
    rank: int
    status: Status
    note: str = ""
    failed_check: str | None = None
    witness_minor: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    conditions: tuple = ()
    chain: tuple = ()
    base: tuple | None = None  # (pattern, realization) the last chain step started from

    @property
    def order(self) -> int:
        return self.pattern.order

    @property
    def verified(self) -> bool:
        return self.status is Status.VERIFIED

    def with_provenance(self, conditions=(), chain=(), base=None) -> "SapCertificate":
        return replace(self, conditions=tuple(conditions), chain=tuple(chain), base=base)


def check_certifiable(P: Pattern):
    if P.kind is PatternKind.MIXED:
        raise PreconditionError("mixed patterns (signs together with * or @) "
                                "cannot be certified")


@dataclass(frozen=True)
class JacobianCheck:
    rank: int
    witness: tuple | None
    num_vars: int


def jacobian_check(P: Pattern, A: ExactMatrix) -> JacobianCheck:
    X = SymbolicMatrix.from_pattern(P)
    J = jacobian(X)
    JA = evaluate_jacobian(J, realization_point(A, X.placement))
    res = bareiss_rank(JA)
    witness = None
    if res.rank == P.order:
        witness = (tuple(r + 1 for r in res.rows), tuple(c + 1 for c in res.cols))
    return JacobianCheck(res.rank, witness, X.num_vars)


def certify_sap(P: Pattern, A: ExactMatrix, *, strict: bool = True) -> SapCertificate:
    """Run the nilpotent-Jacobian test on realization ``A`` of ``P``.

    Checks run in the fixed order membership, nilpotency, rank.  With
    ``strict`` a membership failure raises :class:`PreconditionError`;
    otherwise it becomes a REJECTED certificate.
    """
    if A.order != P.order:
        raise DimensionError(f"order mismatch: pattern {P.order}, matrix {A.order}")
    check_certifiable(P)
    placement = tuple(P.nonzero_positions())
    if not membership(A, P):
        if strict:
            raise PreconditionError("realization is not a member of the pattern")
        return SapCertificate(P, A, placement, 0, Status.REJECTED,
                              note="realization violates the pattern",
                              failed_check="membership")
    if not char_poly_numeric(A).is_monomial():
        return SapCertificate(P, A, placement, 0, Status.REJECTED,
                              note="realization is not nilpotent",
                              failed_check="nilpotency")
    jc = jacobian_check(P, A)
    n = P.order
    if jc.rank < n:
        note = f"Jacobian rank {jc.rank} < {n}"
        if jc.num_vars < n:
            note += f" (only {jc.num_vars} variables)"
        return SapCertificate(P, A, placement, jc.rank, Status.REJECTED,
                              note=note, failed_check="rank")
    return SapCertificate(P, A, placement, jc.rank, Status.VERIFIED,
                          note="nilpotent realization with full-rank Jacobian; "
                               "every superpattern is spectrally arbitrary",
                          witness_minor=jc.witness)


__all__ = [
    "JacobianMatrix", "SapCertificate", "Status", "certify_sap", "evaluate_jacobian",
    "jacobian", "rank_exact", "realization_point", "jacobian_check",
]
