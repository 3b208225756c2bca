"""Divided differences with repeated nodes, by two independent routes.

The determinant route forms the ratio of two bordered monomial
determinants; the recursive route runs the classical table with
``f^(j)(xi)/j!`` base cases along confluent groups.  The two must agree,
which is one of the package's standing cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .determinant import SINGULAR_FLOOR, build_matrix, lu_det
from .errors import ConditioningError
from .expr import Expr, jet_eval, monomials, powi, shift_argument, X
from .nodes import NodeSystem, normalize_nodes

__all__ = ["DividedDifference", "divdiff_det", "divdiff_recursive"]

# beyond this node range both routes recenter on the centroid, which is
# exactness-preserving for divided differences and tames the monomial
# Vandermonde conditioning
SHIFT_SPREAD = 10.0


@dataclass(frozen=True)
class DividedDifference:
    value: float
    order: int
    nodes: NodeSystem
    method: str  # 'determinant_ratio' or 'recursive'


def _maybe_shift(f: Expr, ns: NodeSystem) -> tuple[Expr, NodeSystem]:
    if ns.max - ns.min <= SHIFT_SPREAD:
        return f, ns
    expanded = ns.expand()
    center = sum(expanded) / len(expanded)
    shifted = normalize_nodes([p - center for p in expanded])
    return shift_argument(f, center), shifted


def divdiff_det(f: Expr, points: Sequence[float]) -> DividedDifference:
    """Divided difference as a ratio of bordered monomial determinants.

    The numerator borders ``1, x, ..., x^(k-1)`` with ``f``, the
    denominator with ``x^k``; full confluence collapses to the coincident
    determinant and yields ``f^(k)(x)/k!`` with no special casing.
    """
    original = normalize_nodes(points)
    k = original.total - 1
    g, ns = _maybe_shift(f, original)
    basis = monomials(k)
    empty = ((),) * (k + 1)
    num = lu_det(build_matrix(basis + (g,), empty, 0, ns))
    den = lu_det(build_matrix(basis + (powi(X, k),), empty, 0, ns))
    if abs(den.value) < SINGULAR_FLOOR:
        raise ConditioningError(
            "denominator determinant collapsed; node system is numerically degenerate")
    return DividedDifference(num.value / den.value, k, original, "determinant_ratio")


def divdiff_recursive(f: Expr, points: Sequence[float]) -> DividedDifference:
    """Classical divided-difference table on the sorted points.

    Confluent entries use the Taylor coefficients ``f^(j)(xi)/j!`` as base
    cases, so repeated nodes are exact rather than a limit.
    """
    original = normalize_nodes(points)
    g, ns = _maybe_shift(f, original)
    z = ns.expand()
    k = len(z) - 1
    taylor = {
        xi: jet_eval(g, xi, mult - 1).coeffs
        for xi, mult in zip(ns.distinct, ns.mults)
    }
    column = [taylor[zi][0] for zi in z]
    for j in range(1, k + 1):
        nxt = []
        for i in range(k + 1 - j):
            if z[i + j] == z[i]:
                nxt.append(taylor[z[i]][j])
            else:
                nxt.append((column[i + 1] - column[i]) / (z[i + j] - z[i]))
        column = nxt
    return DividedDifference(column[0], k, original, "recursive")
