"""Exception types shared across the package."""

from __future__ import annotations


class WmvtError(Exception):
    """Base class for library-specific failures."""


class ExprSyntaxError(WmvtError):
    """Source text does not conform to the expression grammar.

    Attributes:
        offset: byte offset into the source where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    """Identifier other than ``x`` or a supported function name."""


class EvalDomainError(WmvtError):
    """Evaluation hit a point outside a subexpression's domain."""


class DimensionError(WmvtError):
    """Non-conformable rows/columns in matrix assembly."""


class RegularityError(WmvtError):
    """A required nonvanishing (regularity) condition failed.

    Carries the offending minor order ``n`` and sample point ``xi`` when
    known, plus the full check report if one was computed.
    """

    def __init__(self, message: str, n: int | None = None,
                 xi: float | None = None, report=None):
        super().__init__(message)
        self.n = n
        self.xi = xi
        self.report = report


class HypothesisError(WmvtError):
    """A solver hypothesis beyond regularity fails numerically."""


class ConditioningError(WmvtError):
    """A denominator quantity collapsed below tolerance."""


class NoRootError(WmvtError):
    """The intermediate-point scan found no admissible candidate.

    Attributes:
        grid_min: smallest |mismatch| seen on the scan grid.
        argmin: abscissa where that minimum occurred.
    """

    def __init__(self, message: str, grid_min: float | None = None,
                 argmin: float | None = None):
        super().__init__(message)
        self.grid_min = grid_min
        self.argmin = argmin
