"""Generalized Wronskian determinant calculus and mean value certificates.

The package parses a small expression language, evaluates derivatives of
arbitrary finite order through truncated-Taylor jets, assembles anchored
functional determinants over confluent node systems, computes divided
differences by two independent routes, exposes the quasi-differential
operator calculus, and locates certified intermediate points for the
general cross-multiplied determinant identity together with its classical
specializations.
"""

from .determinant import (AnchoredSystem, DetResult, RegularityReport,
                          assemble_matrix, det_cofactor, lu_det,
                          regularity_check, w_det, wronskian_at)
from .divdiff import DividedDifference, divdiff_det, divdiff_recursive
from .errors import (ConditioningError, DimensionError, EvalDomainError,
                     ExprSyntaxError, HypothesisError, NoRootError,
                     RegularityError, UnknownIdentifierError, WmvtError)
from .expr import (Expr, derivatives_on_grid, evaluate, jet_eval,
                   monomials, parse, taylor_monomials, to_source)
from .jets import Jet
from .mvt import (MvtCertificate, MvtProblem, RatzRusselResult,
                  TaylorMvtResult, cauchy_mvt, divdiff_mvt_problem,
                  identity_mismatch, exterior_anchor_problem,
                  exterior_identity_sides, find_intermediate_point,
                  ratz_russel_mvt, taylor_mvt)
from .nodes import NodeSystem, close_pairs, is_nonidentical, normalize_nodes
from .quasiops import (OperatorTable, VanishingSpec, build_operator_table,
                       vanishes_times, vanishing_product, v_minor,
                       ww_n, ww_n_grid, ww_n_recursive)
from .verify import SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "AnchoredSystem", "DetResult", "RegularityReport",
    "assemble_matrix", "det_cofactor", "lu_det", "regularity_check",
    "w_det", "wronskian_at",
    "DividedDifference", "divdiff_det", "divdiff_recursive",
    "ConditioningError", "DimensionError", "EvalDomainError",
    "ExprSyntaxError", "HypothesisError", "NoRootError",
    "RegularityError", "UnknownIdentifierError", "WmvtError",
    "Expr", "derivatives_on_grid", "evaluate", "jet_eval",
    "monomials", "parse", "taylor_monomials", "to_source",
    "Jet",
    "MvtCertificate", "MvtProblem", "RatzRusselResult", "TaylorMvtResult",
    "cauchy_mvt", "divdiff_mvt_problem", "identity_mismatch",
    "exterior_anchor_problem", "exterior_identity_sides",
    "find_intermediate_point", "ratz_russel_mvt", "taylor_mvt",
    "NodeSystem", "close_pairs", "is_nonidentical", "normalize_nodes",
    "OperatorTable", "VanishingSpec", "build_operator_table",
    "vanishes_times", "vanishing_product", "v_minor",
    "ww_n", "ww_n_grid", "ww_n_recursive",
    "SuiteReport", "run_suite",
]
