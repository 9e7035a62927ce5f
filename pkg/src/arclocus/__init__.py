"""arclocus: exact arc-space contact-locus codimensions and minimal log
discrepancies, cross-validated by finite-field jet counting."""

from .errors import (ArclocusError, BudgetError, DisagreementError, InputError,
                     LiftingObstructionError)
from .extended import NEG_INF, POS_INF, ExtendedRational, frac
from .jet_engine import (ContactQuery, JetSystem, Poly, Relation,
                         SingularityClass, TruncatedArc, check_fiber_stability,
                         classify_hypersurface, count_jet_points,
                         empirical_codim, empirical_codim_ambient,
                         jet_equations, newton_lift, poly_from_support)
from .lattice_opt import (LatticeProgram, PiecewiseProgram, PiecewiseSolution,
                          minimize_lattice, minimize_piecewise, solve_piecewise)
from .monomial_arcs import (CenterSpec, MonomialIdeal, NewtonHypersurface,
                            contact_codim_monomial, mld_monomial,
                            nondegenerate_hypersurface_mld, ord_w)
from .polyparse import PolyExpr, parse_polynomial, print_polynomial
from .resolution_model import (MldResult, PairCoefficients, ResolutionData,
                               classical_pair_codim, contact_codim_exact,
                               contact_codim_ge, is_log_canonical,
                               log_discrepancy_coeffs, mld_at_generic_point,
                               mld_bound_check, mld_on_w)
from .theorem_lab import (AdjunctionCase, DivisorSide, MonomialPair,
                          SemicontinuityCase, check_inversion_of_adjunction,
                          check_lc_adjunction, check_semicontinuity)

__version__ = "0.1.0"

__all__ = [
    "ArclocusError", "BudgetError", "DisagreementError", "InputError",
    "LiftingObstructionError",
    "ExtendedRational", "NEG_INF", "POS_INF", "frac",
    "LatticeProgram", "PiecewiseProgram", "PiecewiseSolution",
    "minimize_lattice", "minimize_piecewise", "solve_piecewise",
    "ResolutionData", "PairCoefficients", "MldResult",
    "log_discrepancy_coeffs", "is_log_canonical", "mld_on_w",
    "mld_at_generic_point", "contact_codim_exact", "contact_codim_ge",
    "classical_pair_codim", "mld_bound_check",
    "MonomialIdeal", "CenterSpec", "NewtonHypersurface", "ord_w",
    "contact_codim_monomial", "mld_monomial", "nondegenerate_hypersurface_mld",
    "Poly", "JetSystem", "TruncatedArc", "ContactQuery", "Relation",
    "SingularityClass", "jet_equations", "count_jet_points", "empirical_codim",
    "empirical_codim_ambient", "newton_lift", "check_fiber_stability",
    "classify_hypersurface", "poly_from_support",
    "AdjunctionCase", "DivisorSide", "MonomialPair", "SemicontinuityCase",
    "check_inversion_of_adjunction", "check_lc_adjunction",
    "check_semicontinuity",
    "PolyExpr", "parse_polynomial", "print_polynomial",
    "__version__",
]
