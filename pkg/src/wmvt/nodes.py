"""Canonicalization of point sequences into sorted nodes with multiplicities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["NodeSystem", "normalize_nodes", "is_nonidentical", "close_pairs"]

CLOSE_PAIR_TOL = 1e-8


@dataclass(frozen=True)
class NodeSystem:
    """Distinct sorted evaluation points with multiplicities.

    ``permutation`` maps grouped positions back to the input: applying it
    to the input sequence reproduces the grouped form returned by
    :meth:`expand`.  Equal input values keep their original order (stable).
    """

    distinct: tuple[float, ...]
    mults: tuple[int, ...]
    permutation: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.mults)

    @property
    def count(self) -> int:
        return len(self.distinct)

    @property
    def min(self) -> float:
        return self.distinct[0]

    @property
    def max(self) -> float:
        return self.distinct[-1]

    def expand(self) -> tuple[float, ...]:
        """The grouped sequence (xi_1 repeated k_1 times, ...)."""
        out: list[float] = []
        for xi, k in zip(self.distinct, self.mults):
            out.extend([xi] * k)
        return tuple(out)


def normalize_nodes(points: Sequence[float]) -> NodeSystem:
    """Group a point sequence into strictly increasing distinct values.

    Confluence is decided by exact float equality; near-coincident values
    stay separate (see :func:`close_pairs` for the conditioning advisory).
    """
    pts = [float(p) for p in points]
    if not pts:
        raise ValueError("node sequence must be nonempty")
    perm = sorted(range(len(pts)), key=lambda i: (pts[i], i))
    distinct: list[float] = []
    mults: list[int] = []
    for i in perm:
        if distinct and pts[i] == distinct[-1]:
            mults[-1] += 1
        else:
            distinct.append(pts[i])
            mults.append(1)
    return NodeSystem(tuple(distinct), tuple(mults), tuple(perm))


def is_nonidentical(ns: NodeSystem) -> bool:
    """True iff the system has at least two distinct points."""
    return ns.count >= 2


def close_pairs(ns: NodeSystem, tol: float = CLOSE_PAIR_TOL) -> tuple[tuple[float, float], ...]:
    """Adjacent distinct nodes closer than ``tol`` (conditioning advisory)."""
    out = []
    for a, b in zip(ns.distinct, ns.distinct[1:]):
        if b - a < tol:
            out.append((a, b))
    return tuple(out)
