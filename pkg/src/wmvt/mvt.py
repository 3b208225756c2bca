"""Intermediate-point location and certification.

Given an anchored system, two bordering functions ``f, g`` with anchor
extensions ``p, q`` and ``k+1`` nonidentical nodes, the cross-multiplied
determinant identity

    W[f](xi,...,xi) * W[g](x_1..x_{k+1}) = W[g](xi,...,xi) * W[f](x_1..x_{k+1})

has a solution ``xi`` strictly inside the node hull whenever the leading
minors of the system stay away from zero.  The solver scans the mismatch
``h(xi)`` of the two sides on a dense grid, bisects the leftmost sign
change (or falls back to the minimizer of ``|h|``), and returns a
certificate carrying the located point, its bracket, the recomputed
relative residual and condition diagnostics.

Convenience wrappers instantiate the classical specializations: the
two-function ratio form on an interval, the Taylor remainder form, and
the divided-difference ratio form.  An exterior-node adapter turns value
and derivative data at points outside the interval into anchor vectors,
with an independent full-determinant evaluation of the resulting identity
for cross-checking.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .determinant import (AnchoredSystem, DetResult, EPS, build_matrix,
                          coincident_dets, lu_det, regularity_check, w_det)
from .divdiff import DividedDifference, divdiff_recursive
from .errors import HypothesisError, NoRootError, RegularityError
from .expr import (Expr, const, derivatives_on_grid, evaluate, jet_eval,
                   monomials, powi, taylor_monomials, X)
from .nodes import NodeSystem, is_nonidentical, normalize_nodes

__all__ = [
    "MvtProblem", "MvtCertificate", "TaylorMvtResult", "RatzRusselResult",
    "identity_mismatch", "find_intermediate_point",
    "cauchy_mvt", "taylor_mvt", "ratz_russel_mvt", "divdiff_mvt_problem",
    "exterior_anchor_problem", "exterior_identity_sides",
]

DEFAULT_GRID = 1024
DEFAULT_TOL = 1e-9
BISECT_REL = 1e-13
ENDPOINT_MARGIN_REL = 1e-9
NOISE_FLOOR_FACTOR = 64.0
GRID_ENV_VAR = "WMVT_GRID"


def _default_grid() -> int:
    raw = os.environ.get(GRID_ENV_VAR)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{GRID_ENV_VAR} must be an integer, got {raw!r}")
        if value < 8:
            raise ValueError(f"{GRID_ENV_VAR} must be >= 8, got {value}")
        return value
    return DEFAULT_GRID


@dataclass(frozen=True)
class MvtProblem:
    """An anchored system bordered by ``f, p`` and ``g, q`` over fixed nodes.

    The two node-side determinants are computed once at construction and
    cached; the instance is immutable afterwards.
    """

    sys: AnchoredSystem
    f: Expr
    g: Expr
    p: tuple[float, ...]
    q: tuple[float, ...]
    nodes: tuple[float, ...]
    node_system: NodeSystem = field(init=False, repr=False)
    node_det_f: DetResult = field(init=False, repr=False)
    node_det_g: DetResult = field(init=False, repr=False)

    def __post_init__(self):
        p = tuple(float(c) for c in self.p)
        q = tuple(float(c) for c in self.q)
        nodes = tuple(float(v) for v in self.nodes)
        if len(p) != self.sys.m or len(q) != self.sys.m:
            raise ValueError(f"p and q must have {self.sys.m} coordinates")
        if len(nodes) != self.sys.k + 1:
            raise ValueError(f"expected {self.sys.k + 1} nodes, got {len(nodes)}")
        ns = normalize_nodes(nodes)
        if not is_nonidentical(ns):
            raise ValueError("nodes must be nonidentical")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "node_system", ns)
        object.__setattr__(self, "node_det_f", w_det(self.sys, (self.f,), (p,), ns))
        object.__setattr__(self, "node_det_g", w_det(self.sys, (self.g,), (q,), ns))

    @property
    def hull(self) -> tuple[float, float]:
        return (self.node_system.min, self.node_system.max)


@dataclass(frozen=True)
class MvtCertificate:
    """Machine-checkable record of a located intermediate point.

    ``rhs_dets`` holds the two cached node-side determinants ``(a, b)``:
    ``a`` borders with ``g, q`` and ``b`` with ``f, p``.  ``residual`` is
    ``|lhs - rhs|`` of the identity at ``xi`` relative to
    ``max(|lhs|, |rhs|, 1e-300)``; ``condition`` is the worst pivot-ratio
    estimate among the four determinants involved.
    """

    xi: float
    bracket: tuple[float, float]
    residual: float
    rhs_dets: tuple[float, float]
    strategy: str  # 'sign_change_bisection' or 'minimum_of_abs'
    condition: float
    brackets: tuple[tuple[float, float], ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "xi": self.xi,
            "bracket": list(self.bracket),
            "residual": self.residual,
            "rhs_dets": {"a": self.rhs_dets[0], "b": self.rhs_dets[1]},
            "strategy": self.strategy,
            "condition": self.condition,
            "brackets": [list(b) for b in self.brackets],
        }


def _xi_side_det(prob: MvtProblem, func: Expr, anchor: tuple[float, ...],
                 xi: float) -> DetResult:
    ns = normalize_nodes([xi] * (prob.sys.k + 1))
    return w_det(prob.sys, (func,), (anchor,), ns)


def identity_mismatch(prob: MvtProblem, xi: float) -> float:
    """Mismatch ``h(xi)`` between the two sides of the identity at ``xi``."""
    wf = _xi_side_det(prob, prob.f, prob.p, xi).value
    wg = _xi_side_det(prob, prob.g, prob.q, xi).value
    return wf * prob.node_det_g.value - wg * prob.node_det_f.value


def _xi_side_grid(prob: MvtProblem, xis: np.ndarray):
    sys = prob.sys
    mult = sys.k + 1
    f_vals, f_hads = coincident_dets(sys.funcs + (prob.f,), sys.anchors + (prob.p,),
                                     sys.m, xis, mult)
    g_vals, g_hads = coincident_dets(sys.funcs + (prob.g,), sys.anchors + (prob.q,),
                                     sys.m, xis, mult)
    return f_vals, f_hads, g_vals, g_hads


def _mismatch_grid(prob: MvtProblem, xis: np.ndarray):
    """h values over a grid plus the product scale and a machine-noise floor."""
    f_vals, f_hads, g_vals, g_hads = _xi_side_grid(prob, xis)
    a = prob.node_det_g.value
    b = prob.node_det_f.value
    lhs = f_vals * a
    rhs = g_vals * b
    h = lhs - rhs
    scale = float(max(np.max(np.abs(lhs)), np.max(np.abs(rhs)))) if len(xis) else 0.0
    noise = (f_hads * abs(a) + np.abs(f_vals) * prob.node_det_g.hadamard
             + g_hads * abs(b) + np.abs(g_vals) * prob.node_det_f.hadamard)
    floor = NOISE_FLOOR_FACTOR * EPS * float(np.max(noise)) if len(xis) else 0.0
    return h, scale, floor


def _h_at(prob: MvtProblem, t: float) -> float:
    h, _, _ = _mismatch_grid(prob, np.array([t]))
    return float(h[0])


def _certificate(prob: MvtProblem, xi: float, bracket: tuple[float, float],
                 strategy: str, brackets: tuple[tuple[float, float], ...],
                 residual_override: float | None = None) -> MvtCertificate:
    det_f_xi = _xi_side_det(prob, prob.f, prob.p, xi)
    det_g_xi = _xi_side_det(prob, prob.g, prob.q, xi)
    a = prob.node_det_g.value
    b = prob.node_det_f.value
    lhs = det_f_xi.value * a
    rhs = det_g_xi.value * b
    if residual_override is not None:
        residual = residual_override
    else:
        residual = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    condition = max(det_f_xi.condition_estimate, det_g_xi.condition_estimate,
                    prob.node_det_f.condition_estimate,
                    prob.node_det_g.condition_estimate)
    return MvtCertificate(xi, bracket, residual, (a, b), strategy, condition,
                          brackets)


def _bisect(prob: MvtProblem, lo: float, hi: float, h_lo: float, h_hi: float,
            width_target: float) -> float:
    while hi - lo > width_target:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        h_mid = _h_at(prob, mid)
        if h_mid == 0.0:
            return mid
        if (h_lo < 0.0) != (h_mid < 0.0):
            hi, h_hi = mid, h_mid
        else:
            lo, h_lo = mid, h_mid
    return 0.5 * (lo + hi)


def find_intermediate_point(prob: MvtProblem, grid: int | None = None,
                            tol: float = DEFAULT_TOL,
                            regularity_grid: int = 128,
                            refine: bool = True) -> MvtCertificate:
    """Locate and certify an intermediate point inside the node hull.

    Scans the identity mismatch on ``grid`` interior points (default 1024,
    overridable via the ``WMVT_GRID`` environment variable), bisects the
    leftmost sign change down to a bracket of ``1e-13`` times the hull
    span, and otherwise returns the minimizer of ``|h|`` when it is small
    against the product scale.  ``h`` identically zero (to tolerance, or
    below the determinant roundoff floor) yields the hull midpoint, since
    the identity then holds everywhere representable.

    Raises :class:`RegularityError` when the leading-minor precheck on
    the node hull fails, and :class:`NoRootError` when no sign change
    exists and the best ``|h|`` is not small enough to certify.
    """
    lo, hi = prob.hull
    span = hi - lo
    hull_sys = prob.sys.with_interval((lo, hi))
    report = regularity_check(hull_sys, regularity_grid)
    if not report.passed:
        worst = report.first_failure()
        raise RegularityError(
            f"leading minor V_{worst.n} drops to {worst.min_abs:.3e} "
            f"near xi = {worst.xi!r}",
            n=worst.n, xi=worst.xi, report=report)
    a_decl, b_decl = prob.sys.interval
    if a_decl < lo or b_decl > hi:
        # the conclusion needs regularity on the hull only; still sample the
        # declared interval and warn when the wider hypothesis fails there
        if not regularity_check(prob.sys, regularity_grid).passed:
            warnings.warn(
                "regularity holds on the node hull but fails somewhere on the "
                f"declared interval [{a_decl}, {b_decl}]; proceeding on "
                f"[{lo}, {hi}]", stacklevel=2)

    n_grid = grid if grid is not None else _default_grid()
    delta = ENDPOINT_MARGIN_REL * span
    xs = np.linspace(lo + delta, hi - delta, n_grid)
    h, scale, floor = _mismatch_grid(prob, xs)

    # identically-zero mismatch: any interior point satisfies the identity
    if scale == 0.0 or scale <= floor or np.all(np.abs(h) <= tol * scale):
        mid = 0.5 * (lo + hi)
        return _certificate(prob, mid, (float(xs[0]), float(xs[-1])),
                            "minimum_of_abs", (), residual_override=0.0)

    brackets: list[tuple[float, float]] = []
    roots: list[tuple[float, float, float, float, float]] = []  # lo,hi,hlo,hhi,x0
    i = 0
    while i < len(xs):
        if h[i] == 0.0:
            blo = float(xs[i - 1]) if i > 0 else lo
            bhi = float(xs[i + 1]) if i + 1 < len(xs) else hi
            brackets.append((blo, bhi))
            roots.append((blo, bhi, 0.0, 0.0, float(xs[i])))
        elif i + 1 < len(xs) and h[i + 1] != 0.0 and (h[i] < 0.0) != (h[i + 1] < 0.0):
            brackets.append((float(xs[i]), float(xs[i + 1])))
            roots.append((float(xs[i]), float(xs[i + 1]),
                          float(h[i]), float(h[i + 1]), math.nan))
        i += 1

    width_target = BISECT_REL * span
    if roots:
        blo, bhi, h_lo, h_hi, exact = roots[0]
        if not math.isnan(exact):
            xi = exact
            bracket = (blo, bhi)
        else:
            xi = _bisect(prob, blo, bhi, h_lo, h_hi, width_target)
            bracket = (blo, bhi)
        return _certificate(prob, xi, bracket, "sign_change_bisection",
                            tuple(brackets))

    # no sign change: chase the minimizer of |h|, zooming locally
    j = int(np.argmin(np.abs(h)))
    best_x, best_h = float(xs[j]), float(h[j])
    w_lo = float(xs[max(j - 1, 0)])
    w_hi = float(xs[min(j + 1, len(xs) - 1)])
    if refine:
        for _ in range(12):
            sub = np.linspace(w_lo, w_hi, 65)
            hs, _, _ = _mismatch_grid(prob, sub)
            signs = np.sign(hs)
            flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
            if flips.size:
                fi = int(flips[0])
                xi = _bisect(prob, float(sub[fi]), float(sub[fi + 1]),
                             float(hs[fi]), float(hs[fi + 1]), width_target)
                bracket = (float(sub[fi]), float(sub[fi + 1]))
                return _certificate(prob, xi, bracket, "sign_change_bisection",
                                    tuple(brackets) + (bracket,))
            jj = int(np.argmin(np.abs(hs)))
            if abs(hs[jj]) < abs(best_h):
                best_x, best_h = float(sub[jj]), float(hs[jj])
            w_lo = float(sub[max(jj - 1, 0)])
            w_hi = float(sub[min(jj + 1, 64)])
            if w_hi - w_lo <= width_target:
                break
    if abs(best_h) <= tol * scale:
        cert = _certificate(prob, best_x,
                            (max(lo, best_x - (hi - lo) / n_grid),
                             min(hi, best_x + (hi - lo) / n_grid)),
                            "minimum_of_abs", tuple(brackets))
        if cert.residual <= tol:
            return cert
    raise NoRootError(
        f"no sign change and min |h| = {abs(best_h):.3e} at {best_x!r} "
        f"exceeds {tol} times the product scale {scale:.3e}",
        grid_min=abs(best_h), argmin=best_x)


# -- classical specializations ----------------------------------------------

def cauchy_mvt(f: Expr, g: Expr, a: float, b: float, **options) -> MvtCertificate:
    """Two-function ratio form: k = 1, constant weight, nodes ``(a, b)``."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    sys = AnchoredSystem(0, 1, (const(1.0),), (), (a, b))
    prob = MvtProblem(sys, f, g, (), (), (a, b))
    return find_intermediate_point(prob, **options)


@dataclass(frozen=True)
class TaylorMvtResult:
    """Certificate plus the remainder decomposition at the located point."""

    certificate: MvtCertificate
    polynomial_value: float   # degree k-1 expansion of f around a, at x
    remainder: float          # f(x) minus that expansion
    remainder_at_xi: float    # f^(k)(xi) (x-a)^k / k!

    @property
    def xi(self) -> float:
        return self.certificate.xi


def taylor_mvt(f: Expr, a: float, x: float, k: int, **options) -> TaylorMvtResult:
    """Remainder form: scaled powers of ``(x - a)`` and nodes ``(a,..,a,x)``."""
    if not a < x:
        raise ValueError(f"need a < x, got a={a}, x={x}")
    if k < 1:
        raise ValueError("k must be >= 1")
    basis = taylor_monomials(a, k + 1)
    sys = AnchoredSystem(0, k, basis[:k], (), (a, x))
    prob = MvtProblem(sys, f, basis[k], (), (), (a,) * k + (x,))
    cert = find_intermediate_point(prob, **options)
    coeffs = jet_eval(f, a, k - 1).coeffs
    poly = sum(c * (x - a) ** i for i, c in enumerate(coeffs))
    remainder = evaluate(f, x) - poly
    kth = jet_eval(f, cert.xi, k).derivative(k)
    return TaylorMvtResult(cert, float(poly), float(remainder),
                           kth * (x - a) ** k / math.factorial(k))


def divdiff_mvt_problem(f: Expr, points: Sequence[float]) -> MvtProblem:
    """Divided-difference form: monomial weights and ``g = x^k``."""
    ns = normalize_nodes(points)
    if not is_nonidentical(ns):
        raise ValueError("nodes must be nonidentical")
    k = ns.total - 1
    sys = AnchoredSystem(0, k, monomials(k), (), (ns.min, ns.max))
    return MvtProblem(sys, f, powi(X, k), (), (), tuple(points))


@dataclass(frozen=True)
class RatzRusselResult:
    """Certificate plus the two divided differences of the ratio form."""

    certificate: MvtCertificate
    dd_f: DividedDifference
    dd_g: DividedDifference

    @property
    def xi(self) -> float:
        return self.certificate.xi


def ratz_russel_mvt(f: Expr, g: Expr, points: Sequence[float],
                    **options) -> RatzRusselResult:
    """Ratio-of-divided-differences form.

    Requires ``g``'s k-th derivative to stay away from zero on the open
    node hull (sampled); raises :class:`HypothesisError` otherwise.
    """
    ns = normalize_nodes(points)
    if not is_nonidentical(ns):
        raise ValueError("nodes must be nonidentical")
    k = ns.total - 1
    lo, hi = ns.min, ns.max
    margin = ENDPOINT_MARGIN_REL * (hi - lo)
    xs = np.linspace(lo + margin, hi - margin, 64)
    gk = derivatives_on_grid(g, xs, k)[k]
    signs = np.sign(gk)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if flips.size:
        worst = float(0.5 * (xs[flips[0]] + xs[flips[0] + 1]))
        raise HypothesisError(
            f"g^({k}) changes sign near xi = {worst!r}; the ratio form requires it nonzero")
    if np.min(np.abs(gk)) <= 1e-12 * (1.0 + float(np.max(np.abs(gk)))):
        worst = float(xs[int(np.argmin(np.abs(gk)))])
        raise HypothesisError(
            f"g^({k}) vanishes near xi = {worst!r}; the ratio form requires it nonzero")
    sys = AnchoredSystem(0, k, monomials(k), (), (lo, hi))
    prob = MvtProblem(sys, f, g, (), (), tuple(points))
    cert = find_intermediate_point(prob, **options)
    return RatzRusselResult(cert, divdiff_recursive(f, points),
                            divdiff_recursive(g, points))


# -- exterior-node adapter ----------------------------------------------------

def exterior_anchor_problem(funcs: Sequence[Expr], f: Expr, g: Expr,
                            exterior: Sequence[float],
                            nodes: Sequence[float],
                            interval: tuple[float, float],
                            regularity_grid: int = 64) -> MvtProblem:
    """Fold exterior evaluation points into anchor vectors.

    Each function contributes a row of values and successive derivatives
    at the (grouped) exterior points; ``p`` and ``q`` are filled from
    ``f`` and ``g`` the same way.  The mixed leading minors (exterior
    block plus ``n`` coincident interior columns) are sampled over the
    interval for ``n = 0..k`` and must stay away from zero.
    """
    funcs = tuple(funcs)
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise ValueError(f"interval must satisfy a < b, got [{a}, {b}]")
    exterior = tuple(float(y) for y in exterior)
    m = len(exterior)
    if m == 0:
        raise ValueError("at least one exterior point is required")
    k = len(funcs) - m
    if k < 1:
        raise ValueError(f"{len(funcs)} functions cannot support {m} exterior points")
    if len(nodes) != k + 1:
        raise ValueError(f"expected {k + 1} nodes, got {len(nodes)}")
    for y in exterior:
        if a <= y <= b:
            raise ValueError(f"exterior point {y} lies inside [{a}, {b}]")
    for v in nodes:
        if not a <= float(v) <= b:
            raise ValueError(f"node {v} lies outside [{a}, {b}]")

    ens = normalize_nodes(exterior)

    def data_row(func: Expr) -> tuple[float, ...]:
        row: list[float] = []
        for eta, mult in zip(ens.distinct, ens.mults):
            row.extend(jet_eval(func, eta, mult - 1).derivatives())
        return tuple(row)

    anchors = tuple(data_row(w) for w in funcs)
    p = data_row(f)
    q = data_row(g)

    # mixed-minor regularity: exterior block plus n coincident columns
    xs = np.linspace(a, b, regularity_grid)
    for n in range(0, k + 1):
        d = m + n
        if n == 0:
            fixed = build_matrix(funcs[:d], ((),) * d, 0, ens)
            value = lu_det(fixed).value
            if abs(value) <= 1e-12:
                raise RegularityError(
                    f"mixed minor of order 0 is {value:.3e}", n=0)
            continue
        fixed = build_matrix(funcs[:d], ((),) * d, 0, ens)
        block = np.empty((len(xs), d, d))
        block[:, :, :m] = fixed[None, :, :]
        for i in range(d):
            block[:, i, m:] = derivatives_on_grid(funcs[i], xs, n - 1).T
        vals = np.linalg.det(block)
        signs = np.sign(vals)
        flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
        if flips.size:
            xi_at = float(0.5 * (xs[flips[0]] + xs[flips[0] + 1]))
            raise RegularityError(
                f"mixed minor of order {n} changes sign near xi = {xi_at!r}",
                n=n, xi=xi_at)
        idx = int(np.argmin(np.abs(vals)))
        if abs(vals[idx]) <= 1e-12:
            raise RegularityError(
                f"mixed minor of order {n} drops to {vals[idx]:.3e} "
                f"near xi = {float(xs[idx])!r}", n=n, xi=float(xs[idx]))

    sys = AnchoredSystem(m, k, funcs, anchors, (a, b))
    return MvtProblem(sys, f, g, p, q, tuple(float(v) for v in nodes))


def exterior_identity_sides(funcs: Sequence[Expr], f: Expr, g: Expr,
                            exterior: Sequence[float], nodes: Sequence[float],
                            xi: float) -> tuple[float, float, float]:
    """Evaluate both sides of the full-determinant identity at ``xi``.

    Everything is recomputed from scratch over the combined exterior-plus-
    interior node multisets, independently of the anchored route.  Returns
    ``(lhs, rhs, noise_floor)`` where the floor estimates the roundoff
    scale of either side.
    """
    funcs = tuple(funcs)
    rows = len(funcs) + 1
    empty = ((),) * rows
    mult = len(nodes)
    xi_ns = normalize_nodes(tuple(exterior) + (float(xi),) * mult)
    node_ns = normalize_nodes(tuple(exterior) + tuple(float(v) for v in nodes))
    d1 = lu_det(build_matrix(funcs + (f,), empty, 0, xi_ns))
    d2 = lu_det(build_matrix(funcs + (g,), empty, 0, node_ns))
    d3 = lu_det(build_matrix(funcs + (g,), empty, 0, xi_ns))
    d4 = lu_det(build_matrix(funcs + (f,), empty, 0, node_ns))
    lhs = d1.value * d2.value
    rhs = d3.value * d4.value
    floor = EPS * (abs(d1.value) * d2.hadamard + d1.hadamard * abs(d2.value)
                   + abs(d3.value) * d4.hadamard + d3.hadamard * abs(d4.value))
    return lhs, rhs, floor


def _reduction_functions(sys: AnchoredSystem, f: Expr, g: Expr,
                         p: Sequence[float], q: Sequence[float]):
    """Row-reduction data (alphas, betas, phi, psi) for the anchored rows."""
    from .expr import add, linear_combination

    u = sys.anchor_matrix().T
    alphas = np.linalg.solve(u, -np.asarray(p, dtype=float))
    betas = np.linalg.solve(u, -np.asarray(q, dtype=float))
    phi = add(f, linear_combination(alphas, sys.funcs[: sys.m]))
    psi = add(g, linear_combination(betas, sys.funcs[: sys.m]))
    return alphas, betas, phi, psi
