"""Nilpotent-Jacobian certification and extension of matrix patterns."""

__version__ = "0.1.0"

from .cycles import (CharPoly, CompositeCycle, SimpleCycle, SymbolicMatrix, char_poly_numeric,
                     char_poly_symbolic, composite_cycles, enumerate_simple_cycles,
                     signed_cycle_sum)
from .errors import (ArgumentError, DimensionError, IdentityViolation, ParseError,
                     PreconditionError, SapforgeError)
from .extensions import (ConditionReport, ExtensionIdentity, ExtensionSpec, ambstar_extend,
                         check_condition_i, check_condition_ii, extend_certified,
                         lift_nilpotent_triangle, run_chain, signed_triangle_extend,
                         triangle_extend, verify_ambstar_identity, verify_triangle_identity)
from .families import family, pentadiagonal_relabel
from .inertia import (IapCertificate, RefinedInertia, certify_iap, iap_extend_certified,
                      inertia, refined_inertia)
from .jacobian import (JacobianMatrix, SapCertificate, Status, certify_sap, evaluate_jacobian,
                       jacobian, rank_exact)
from .numbers import AlgebraicField, AlgebraicNumber
from .pattern import (Digraph, Entry, ExactMatrix, Pattern, PatternKind, RationalMatrix,
                      digraph_of, membership, permute, superpattern_of, transpose)
from .polynomial import MultivarPoly
from .search import (Outcome, SearchOptions, SearchResult, is_nilpotent_exact, residual,
                     search_nilpotent)
