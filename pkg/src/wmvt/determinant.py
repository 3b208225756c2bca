"""Anchored functional determinants with confluent derivative columns.

A system of ``m + k`` functions ``w_i`` together with anchor vectors
``u_i`` in R^m spans a square matrix whose first ``m`` columns are the
anchor coordinates and whose remaining columns are blocks of values and
successive derivatives of the ``w_i`` at the distinct nodes: a node of
multiplicity ``mu`` contributes the columns ``w, w', ..., w^(mu-1)``.
With ``m = 0`` and all nodes coincident this is the classical Wronski
determinant.

Determinant values go through an LU factorization with partial pivoting
(row swaps tracked and sign-corrected, no scaling in the default path),
with a cheap condition estimate from the pivot-magnitude ratio.  A naive
cofactor expansion is kept alongside as an independent cross-check, and a
batched path evaluates coincident-node determinants on whole grids at
once for scan-heavy callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .expr import Expr, derivatives_on_grid, jet_eval
from .nodes import NodeSystem, normalize_nodes

__all__ = [
    "AnchoredSystem", "DetResult", "RegularityReport",
    "assemble_matrix", "w_det", "wronskian_at", "regularity_check",
    "lu_det", "det_cofactor", "coincident_dets",
]

EPS = float(np.finfo(float).eps)
SINGULAR_FLOOR = 1e-300
REGULARITY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class AnchoredSystem:
    """Functions ``w_1..w_{m+k}``, anchors ``u_1..u_{m+k}`` and an interval.

    Anchors are vectors in R^m; for ``m = 0`` they may be passed as an
    empty sequence and are normalized to per-function empty tuples.
    """

    m: int
    k: int
    funcs: tuple[Expr, ...]
    anchors: tuple[tuple[float, ...], ...]
    interval: tuple[float, float]

    def __post_init__(self):
        if self.m < 0 or self.k < 1:
            raise ValueError("need m >= 0 and k >= 1")
        funcs = tuple(self.funcs)
        if len(funcs) != self.m + self.k:
            raise DimensionError(
                f"expected {self.m + self.k} functions, got {len(funcs)}")
        anchors = tuple(tuple(float(c) for c in a) for a in self.anchors)
        if self.m == 0 and len(anchors) == 0:
            anchors = ((),) * len(funcs)
        if len(anchors) != len(funcs):
            raise DimensionError(
                f"expected {len(funcs)} anchor vectors, got {len(anchors)}")
        for a in anchors:
            if len(a) != self.m:
                raise DimensionError(
                    f"anchor vector {a} does not have {self.m} coordinates")
        a, b = (float(self.interval[0]), float(self.interval[1]))
        if not a < b:
            raise ValueError(f"interval must satisfy a < b, got [{a}, {b}]")
        object.__setattr__(self, "funcs", funcs)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "interval", (a, b))

    def with_interval(self, interval: tuple[float, float]) -> "AnchoredSystem":
        return AnchoredSystem(self.m, self.k, self.funcs, self.anchors, interval)

    def anchor_matrix(self) -> np.ndarray:
        """The leading m x m anchor block (rows u_1..u_m)."""
        return np.array([self.anchors[i] for i in range(self.m)], dtype=float)


@dataclass(frozen=True)
class DetResult:
    """Determinant value plus cheap diagnostics.

    ``condition_estimate`` is the ratio of the largest to the smallest
    nonzero pivot magnitude (infinity for a singular matrix);
    ``hadamard`` is the product of row 2-norms, a magnitude scale for the
    roundoff floor of the value.  Values smaller than 1e-300 in magnitude
    are reported as 0.0 with ``singular`` set.
    """

    value: float
    condition_estimate: float
    matrix_dim: int
    singular: bool = False
    hadamard: float = 0.0


def build_matrix(funcs: Sequence[Expr], anchors: Sequence[Sequence[float]],
                 m: int, ns: NodeSystem) -> np.ndarray:
    """Assemble the (possibly non-square) anchor + derivative-block matrix.

    Row ``i`` is the anchor coordinates of ``funcs[i]`` followed, for each
    distinct node, by the values ``w_i, w_i', ..., w_i^(mult-1)`` there.
    """
    rows = len(funcs)
    cols = m + ns.total
    out = np.empty((rows, cols))
    for i, (f, anchor) in enumerate(zip(funcs, anchors, strict=True)):
        if len(anchor) != m:
            raise DimensionError(f"anchor {anchor} does not have {m} coordinates")
        out[i, :m] = anchor
        c = m
        for xi, mult in zip(ns.distinct, ns.mults):
            out[i, c: c + mult] = jet_eval(f, xi, mult - 1).derivatives()
            c += mult
    return out


def assemble_matrix(sys: AnchoredSystem, extra_funcs: Sequence[Expr] = (),
                    extra_anchors: Sequence[Sequence[float]] = (),
                    ns: NodeSystem | None = None) -> np.ndarray:
    """Square matrix for ``w_det``: system rows plus optional bordering rows."""
    if ns is None:
        raise ValueError("a node system is required")
    funcs = sys.funcs + tuple(extra_funcs)
    anchors = sys.anchors + tuple(tuple(float(c) for c in a) for a in extra_anchors)
    if len(funcs) != len(anchors):
        raise DimensionError("extra functions and extra anchors must pair up")
    if len(funcs) != sys.m + ns.total:
        raise DimensionError(
            f"{len(funcs)} rows vs {sys.m + ns.total} columns: matrix not square")
    return build_matrix(funcs, anchors, sys.m, ns)


def lu_det(matrix: np.ndarray, equilibrate: bool = False) -> DetResult:
    """Determinant by LU with partial pivoting.

    Row swaps are tracked and the sign corrected, so the value carries the
    sign of the assembled row/column order.  ``equilibrate`` scales rows
    by their max-norm first (for ill-conditioned confluent clusters) and
    undoes the scaling in the value; the default path does no scaling so
    results are bit-reproducible.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix of shape {a.shape} is not square")
    d = a.shape[0]
    hadamard = float(np.prod(np.linalg.norm(a, axis=1)))
    scale_factor = 1.0
    if equilibrate:
        row_max = np.max(np.abs(a), axis=1)
        for i in range(d):
            if row_max[i] > 0.0:
                a[i] /= row_max[i]
                scale_factor *= row_max[i]
    sign = 1.0
    pivots = []
    singular = False
    for c in range(d):
        p = c + int(np.argmax(np.abs(a[c:, c])))
        if a[p, c] == 0.0:
            singular = True
            break
        if p != c:
            a[[c, p]] = a[[p, c]]
            sign = -sign
        pivots.append(a[c, c])
        if c + 1 < d:
            a[c + 1:, c + 1:] -= np.outer(a[c + 1:, c] / a[c, c], a[c, c + 1:])
    if singular:
        value = 0.0
    else:
        value = sign * scale_factor
        for p in pivots:
            value *= p
    mags = np.abs(pivots) if pivots else np.array([])
    if singular or mags.size == 0:
        cond = float("inf")
    else:
        cond = float(mags.max() / mags.min())
    if abs(value) < SINGULAR_FLOOR:
        return DetResult(0.0, cond, d, singular=True, hadamard=hadamard)
    return DetResult(float(value), cond, d, hadamard=hadamard)


def det_cofactor(matrix: np.ndarray) -> float:
    """Naive cofactor expansion; the independent oracle for small dims."""
    a = np.asarray(matrix, dtype=float)
    d = a.shape[0]
    if a.shape != (d, d):
        raise DimensionError(f"matrix of shape {a.shape} is not square")
    if d == 1:
        return float(a[0, 0])
    total = 0.0
    sign = 1.0
    rest = a[:, 1:]
    for r in range(d):
        if a[r, 0] != 0.0:
            minor = np.delete(rest, r, axis=0)
            total += sign * a[r, 0] * det_cofactor(minor)
        sign = -sign
    return total


def w_det(sys: AnchoredSystem, extra_funcs: Sequence[Expr] = (),
          extra_anchors: Sequence[Sequence[float]] = (),
          ns: NodeSystem | None = None, equilibrate: bool = False) -> DetResult:
    """The anchored determinant of the bordered system at ``ns``."""
    return lu_det(assemble_matrix(sys, extra_funcs, extra_anchors, ns),
                  equilibrate=equilibrate)


def wronskian_at(funcs: Sequence[Expr], xi: float) -> float:
    """Wronski determinant of ``funcs`` at a single point.

    Equals the anchored determinant with ``m = 0`` and all ``len(funcs)``
    nodes coincident at ``xi``.
    """
    funcs = tuple(funcs)
    k = len(funcs)
    ns = normalize_nodes([xi] * k)
    matrix = build_matrix(funcs, ((),) * k, 0, ns)
    return lu_det(matrix).value


def coincident_dets(funcs: Sequence[Expr], anchors: Sequence[Sequence[float]],
                    m: int, xis: np.ndarray, mult: int) -> tuple[np.ndarray, np.ndarray]:
    """Batched determinants with all ``mult`` nodes coincident at each ``xis``.

    Returns ``(values, hadamard_bounds)`` over the grid.  This is the fast
    path behind scans; certificate-grade values go through :func:`lu_det`.
    """
    funcs = tuple(funcs)
    d = m + mult
    if len(funcs) != d:
        raise DimensionError(f"{len(funcs)} rows vs {d} columns: matrix not square")
    xis = np.asarray(xis, dtype=float)
    n = len(xis)
    a = np.empty((n, d, d))
    for i, (f, anchor) in enumerate(zip(funcs, anchors, strict=True)):
        if len(anchor) != m:
            raise DimensionError(f"anchor {anchor} does not have {m} coordinates")
        a[:, i, :m] = np.asarray(anchor, dtype=float)
        a[:, i, m:] = derivatives_on_grid(f, xis, mult - 1).T
    values = np.linalg.det(a)
    hadamards = np.prod(np.linalg.norm(a, axis=2), axis=1)
    return values, hadamards


@dataclass(frozen=True)
class MinorMinimum:
    """Smallest sampled |V_n| for one order, with its location.

    ``sign_change`` marks a sign flip between adjacent samples, which
    proves an interior zero even when every sample magnitude clears the
    threshold.
    """

    n: int
    min_abs: float
    xi: float
    ok: bool
    sign_change: bool = False


@dataclass(frozen=True)
class RegularityReport:
    """Grid-sampled nonvanishing check of the leading minors V_0..V_k."""

    passed: bool
    threshold: float
    v0: float | None
    minima: tuple[MinorMinimum, ...]

    def first_failure(self) -> MinorMinimum | None:
        for entry in self.minima:
            if not entry.ok:
                return entry
        return None

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "threshold": self.threshold,
            "v0": self.v0,
            "minima": [
                {"n": e.n, "min_abs": e.min_abs, "xi": e.xi, "ok": e.ok,
                 "sign_change": e.sign_change}
                for e in self.minima
            ],
        }


def regularity_check(sys: AnchoredSystem, grid_count: int = 128,
                     threshold: float = REGULARITY_THRESHOLD) -> RegularityReport:
    """Sample V_n over a uniform grid on the system interval for n = 1..k.

    Also evaluates the anchor determinant V_0 when ``m > 0``.  An order
    fails when any sample magnitude drops below ``threshold`` or when the
    samples change sign (an interior zero exists between those samples no
    matter how large they are); the report records the minimum magnitude
    and its location for every order.
    """
    if grid_count < 2:
        raise ValueError("grid_count must be >= 2")
    a, b = sys.interval
    xs = np.linspace(a, b, grid_count)
    minima: list[MinorMinimum] = []
    passed = True
    v0: float | None = None
    if sys.m > 0:
        v0 = lu_det(sys.anchor_matrix()).value
        ok = abs(v0) > threshold
        passed &= ok
        minima.append(MinorMinimum(0, abs(v0), a, ok))
    for n in range(1, sys.k + 1):
        vals, _ = coincident_dets(sys.funcs[: sys.m + n], sys.anchors[: sys.m + n],
                                  sys.m, xs, n)
        signs = np.sign(vals)
        flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
        idx = int(np.argmin(np.abs(vals)))
        min_abs = float(abs(vals[idx]))
        xi_at = float(xs[idx])
        sign_change = bool(flips.size)
        if sign_change:
            xi_at = float(0.5 * (xs[flips[0]] + xs[flips[0] + 1]))
        ok = min_abs > threshold and not sign_change
        passed &= ok
        minima.append(MinorMinimum(n, min_abs, xi_at, ok, sign_change))
    return RegularityReport(bool(passed), threshold, v0, tuple(minima))
