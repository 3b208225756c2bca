"""Vanishing counts and the quasi-differential operators of the calculus.

``vanishes_times`` tests the multiplicity-weighted vanishing of a
function at a node system whose zeros are not all concentrated at the
interval endpoints.  Bordering an anchored system with a function ``f``
and a zero anchor yields the n-th order operator ``ww_n``; the same
operator is reachable through a first-order recursion in ``n`` involving
the leading minors ``V_n``, and the two routes are cross-checked
numerically throughout the test suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .determinant import AnchoredSystem, build_matrix, coincident_dets, lu_det
from .errors import ConditioningError, RegularityError
from .expr import Expr, add, const, derivatives_on_grid, linear_combination, mul, powi, sub, X
from .nodes import NodeSystem, normalize_nodes

__all__ = [
    "VanishingSpec", "OperatorTable",
    "vanishes_times", "build_operator_table", "ww_n", "ww_n_recursive",
    "v_minor", "ww_n_grid", "vanishing_product",
    "rolle_distinct_zero_bound", "count_zero_evidence",
]

VANISH_TOL = 1e-9
RECURSION_V_FLOOR = 1e-12
GAMMA_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class VanishingSpec:
    """Node system plus interval for a multiplicity-weighted zero pattern.

    The constraint flags record that the leftmost node sits strictly below
    ``b`` and the rightmost strictly above ``a`` (zeros must not all be
    concentrated at the endpoints).
    """

    nodes: NodeSystem
    interval: tuple[float, float]

    def __post_init__(self):
        a, b = (float(self.interval[0]), float(self.interval[1]))
        if not a < b:
            raise ValueError(f"interval must satisfy a < b, got [{a}, {b}]")
        if self.nodes.min < a or self.nodes.max > b:
            raise ValueError("vanishing nodes must lie inside the interval")
        object.__setattr__(self, "interval", (a, b))

    @property
    def first_below_b(self) -> bool:
        return self.nodes.min < self.interval[1]

    @property
    def last_above_a(self) -> bool:
        return self.interval[0] < self.nodes.max

    @property
    def endpoint_ok(self) -> bool:
        return self.first_below_b and self.last_above_a


def vanishes_times(f: Expr, spec: VanishingSpec, tol: float = VANISH_TOL,
                   deriv: int = 0) -> bool:
    """Check ``f^(deriv)`` vanishes per ``spec``'s multiplicity pattern.

    Each required derivative magnitude must stay below
    ``tol * (1 + grid_max)`` where ``grid_max`` is the sampled maximum of
    ``|f^(deriv)|`` over the interval, and the endpoint constraint must
    hold.  ``deriv`` shifts the whole pattern to a higher derivative,
    which is how the derivative-decrement law is verified without
    symbolic differentiation.
    """
    if not spec.endpoint_ok:
        return False
    a, b = spec.interval
    grid = np.linspace(a, b, 512)
    grid_max = float(np.max(np.abs(derivatives_on_grid(f, grid, deriv)[deriv])))
    bound = tol * (1.0 + grid_max)
    for xi, mult in zip(spec.nodes.distinct, spec.nodes.mults):
        derivs = derivatives_on_grid(f, np.array([xi]), deriv + mult - 1)[:, 0]
        for j in range(mult):
            if abs(derivs[deriv + j]) > bound:
                return False
    return True


@dataclass(frozen=True)
class OperatorTable:
    """Elimination data for an anchored system.

    ``gammas[i, n-1]`` solves ``-u_{m+n} = sum_i gammas[i, n-1] * u_i``
    and ``vfuncs[n-1] = w_{m+n} + sum_i gammas[i, n-1] * w_i``.  For
    ``m = 0`` the table is trivial: no gammas and ``vfuncs = funcs``.
    """

    sys: AnchoredSystem
    gammas: np.ndarray  # shape (m, k)
    vfuncs: tuple[Expr, ...]


def build_operator_table(sys: AnchoredSystem) -> OperatorTable:
    m, k = sys.m, sys.k
    if m == 0:
        return OperatorTable(sys, np.zeros((0, k)), sys.funcs)
    u = sys.anchor_matrix().T  # columns are u_1..u_m
    rhs = -np.array([sys.anchors[m + n] for n in range(k)], dtype=float).T
    try:
        gammas = np.linalg.solve(u, rhs)
    except np.linalg.LinAlgError as exc:
        raise RegularityError(
            "anchor vectors u_1..u_m are linearly dependent", n=0) from exc
    residual = float(np.max(np.abs(u @ gammas - rhs))) if k else 0.0
    scale = 1.0 + float(np.max(np.abs(rhs))) if rhs.size else 1.0
    if residual > GAMMA_RESIDUAL_TOL * scale:
        raise RegularityError(
            f"anchor elimination residual {residual:.3e} exceeds tolerance", n=0)
    vfuncs = tuple(
        add(sys.funcs[m + n], linear_combination(gammas[:, n], sys.funcs[:m]))
        for n in range(k)
    )
    return OperatorTable(sys, gammas, vfuncs)


def _zero_anchor(m: int) -> tuple[float, ...]:
    return (0.0,) * m


def ww_n(sys: AnchoredSystem, n: int, f: Expr, xi: float) -> float:
    """Operator value: the bordered determinant with n+1 coincident nodes.

    Rows are ``w_1..w_{m+n}, f`` with anchors ``u_1..u_{m+n}, 0``.
    """
    if not 0 <= n <= sys.k:
        raise IndexError(f"operator order {n} outside 0..{sys.k}")
    funcs = sys.funcs[: sys.m + n] + (f,)
    anchors = sys.anchors[: sys.m + n] + (_zero_anchor(sys.m),)
    ns = normalize_nodes([xi] * (n + 1))
    return lu_det(build_matrix(funcs, anchors, sys.m, ns)).value


def ww_n_grid(sys: AnchoredSystem, n: int, f: Expr, xis: np.ndarray) -> np.ndarray:
    """Batched ``ww_n`` values over a grid (fast-path determinants)."""
    if not 0 <= n <= sys.k:
        raise IndexError(f"operator order {n} outside 0..{sys.k}")
    funcs = sys.funcs[: sys.m + n] + (f,)
    anchors = sys.anchors[: sys.m + n] + (_zero_anchor(sys.m),)
    values, _ = coincident_dets(funcs, anchors, sys.m, xis, n + 1)
    return values


def v_minor(sys: AnchoredSystem, n: int, xi: float) -> float:
    """Leading minor V_n at ``xi``; V_0 is the anchor determinant.

    For ``m = 0`` the value V_0 = 1 is used so that the first step of the
    operator recursion stays well defined (the 0th operator is then plain
    multiplication by 1).
    """
    if n == 0:
        return 1.0 if sys.m == 0 else lu_det(sys.anchor_matrix()).value
    if not 1 <= n <= sys.k:
        raise IndexError(f"minor order {n} outside 0..{sys.k}")
    funcs = sys.funcs[: sys.m + n]
    anchors = sys.anchors[: sys.m + n]
    ns = normalize_nodes([xi] * n)
    return lu_det(build_matrix(funcs, anchors, sys.m, ns)).value


def ww_n_recursive(sys: AnchoredSystem, n: int, f: Expr, xi: float) -> float:
    """Recursion route: d/dxi(ww_{n-1}(f)/V_n) * V_n^2 / V_{n-1}.

    The derivative is a central difference with one Richardson step, at
    step ``1e-6 * max(1, |xi|)``.  V values below 1e-12 anywhere in the
    stencil raise :class:`ConditioningError`.
    """
    if not 1 <= n <= sys.k:
        raise IndexError(f"operator order {n} outside 1..{sys.k}")
    h = 1e-6 * max(1.0, abs(xi))

    def ratio(t: float) -> float:
        vn = v_minor(sys, n, t)
        if abs(vn) < RECURSION_V_FLOOR:
            raise ConditioningError(f"V_{n}({t}) = {vn:.3e} below tolerance")
        return ww_n(sys, n - 1, f, t) / vn

    def central(step: float) -> float:
        return (ratio(xi + step) - ratio(xi - step)) / (2.0 * step)

    derivative = (4.0 * central(h / 2.0) - central(h)) / 3.0
    vn = v_minor(sys, n, xi)
    vprev = v_minor(sys, n - 1, xi)
    if abs(vn) < RECURSION_V_FLOOR or abs(vprev) < RECURSION_V_FLOOR:
        raise ConditioningError(
            f"V_{n}({xi}) or V_{n - 1}({xi}) below tolerance")
    return derivative * vn * vn / vprev


def vanishing_product(ns: NodeSystem) -> Expr:
    """The product ``prod (x - xi_i)^{k_i}``, vanishing per ``ns`` by construction."""
    acc: Expr | None = None
    for xi, mult in zip(ns.distinct, ns.mults):
        factor = powi(sub(X, const(xi)), mult) if xi != 0.0 else powi(X, mult)
        acc = factor if acc is None else mul(acc, factor)
    assert acc is not None
    return acc


def rolle_distinct_zero_bound(mults: Sequence[int], n: int) -> int:
    """Guaranteed distinct zeros of the n-th operator of a product function.

    Simulates the Rolle cascade: each derivative step keeps every zero
    with multiplicity reduced by one and inserts a new simple zero between
    consecutive distinct zeros.  For all-simple nodes this returns
    ``total - n``.
    """
    ms = [int(mu) for mu in mults]
    for _ in range(n):
        if not ms:
            return 0
        inserts = len(ms) - 1
        ms = [mu - 1 for mu in ms if mu >= 2] + [1] * inserts
    return len(ms)


def count_zero_evidence(values: np.ndarray, rel_tol: float = 1e-5) -> int:
    """Lower-bound zero count of a sampled function.

    Counts maximal near-zero runs (|v| <= rel_tol * max|v|) once each,
    plus sign changes between adjacent samples not separated by such a
    run.  Exact multiplicities are not observable at fixed precision, so
    this is deliberately a lower bound.
    """
    values = np.asarray(values, dtype=float)
    vmax = float(np.max(np.abs(values))) if values.size else 0.0
    if vmax == 0.0:
        return int(values.size)
    near = np.abs(values) <= rel_tol * vmax
    count = 0
    prev_sign = 0
    in_cluster = False
    for v, z in zip(values, near):
        if z:
            if not in_cluster:
                count += 1
                in_cluster = True
                prev_sign = 0
        else:
            s = 1 if v > 0 else -1
            if prev_sign != 0 and s != prev_sign:
                count += 1
            prev_sign = s
            in_cluster = False
    return count
