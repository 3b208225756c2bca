"""Truncated Taylor (jet) arithmetic.

A jet records the Taylor coefficients of a scalar function at a base
point: ``coeffs[j] = h^(j)(x0) / j!``.  Coefficient form keeps
intermediate products well scaled up to order ~20; raw derivatives are
recovered by factorial scaling only at the boundary.

The ``*_coeffs`` kernels below operate on arrays of shape
``(order + 1, n)`` so one expression walk can evaluate a whole grid of
base points at once.  The :class:`Jet` value type wraps the single-point
case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvalDomainError

__all__ = ["Jet"]


def constant_coeffs(value: float, order: int, n: int) -> np.ndarray:
    out = np.zeros((order + 1, n))
    out[0] = value
    return out


def variable_coeffs(points: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros((order + 1, len(points)))
    out[0] = points
    if order >= 1:
        out[1] = 1.0
    return out


def mul_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product truncated at the common order."""
    out = np.zeros_like(a)
    for n in range(a.shape[0]):
        out[n] = (a[: n + 1][::-1] * b[: n + 1]).sum(axis=0)
    return out


def div_coeffs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if np.any(b[0] == 0.0):
        raise EvalDomainError("division by zero")
    out = np.zeros_like(a)
    out[0] = a[0] / b[0]
    for n in range(1, a.shape[0]):
        acc = (out[:n][::-1] * b[1: n + 1]).sum(axis=0)
        out[n] = (a[n] - acc) / b[0]
    return out


def exp_coeffs(u: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u)
    out[0] = np.exp(u[0])
    for n in range(1, u.shape[0]):
        j = np.arange(1, n + 1, dtype=float)[:, None]
        out[n] = (j * u[1: n + 1] * out[:n][::-1]).sum(axis=0) / n
    return out


def log_coeffs(u: np.ndarray) -> np.ndarray:
    if np.any(u[0] <= 0.0):
        raise EvalDomainError("log of a non-positive value")
    out = np.zeros_like(u)
    out[0] = np.log(u[0])
    for n in range(1, u.shape[0]):
        j = np.arange(1, n, dtype=float)[:, None]
        acc = (j * out[1:n] * u[1:n][::-1]).sum(axis=0)
        out[n] = (n * u[n] - acc) / (n * u[0])
    return out


def sqrt_coeffs(u: np.ndarray) -> np.ndarray:
    order = u.shape[0] - 1
    if np.any(u[0] < 0.0) or (order >= 1 and np.any(u[0] == 0.0)):
        raise EvalDomainError("sqrt of a negative value (or zero with derivatives)")
    out = np.zeros_like(u)
    out[0] = np.sqrt(u[0])
    for n in range(1, order + 1):
        acc = (out[1:n] * out[1:n][::-1]).sum(axis=0)
        out[n] = (u[n] - acc) / (2.0 * out[0])
    return out


def sincos_coeffs(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """sin and cos share one recurrence, so both come back together."""
    s = np.zeros_like(u)
    c = np.zeros_like(u)
    s[0] = np.sin(u[0])
    c[0] = np.cos(u[0])
    for n in range(1, u.shape[0]):
        ju = np.arange(1, n + 1, dtype=float)[:, None] * u[1: n + 1]
        s[n] = (ju * c[:n][::-1]).sum(axis=0) / n
        c[n] = -(ju * s[:n][::-1]).sum(axis=0) / n
    return s, c


def powi_coeffs(u: np.ndarray, exponent: int) -> np.ndarray:
    """Integer power by repeated squaring; negative via reciprocal."""
    if exponent < 0:
        one = constant_coeffs(1.0, u.shape[0] - 1, u.shape[1])
        return div_coeffs(one, powi_coeffs(u, -exponent))
    result = None
    base = u
    e = exponent
    while e > 0:
        if e & 1:
            result = base if result is None else mul_coeffs(result, base)
        e >>= 1
        if e:
            base = mul_coeffs(base, base)
    if result is None:  # exponent == 0
        return constant_coeffs(1.0, u.shape[0] - 1, u.shape[1])
    return result


def pow_coeffs(u: np.ndarray, exponent: float) -> np.ndarray:
    if float(exponent).is_integer():
        return powi_coeffs(u, int(exponent))
    # non-integer exponents route through exp/log: positive base required
    return exp_coeffs(mul_coeffs(constant_coeffs(exponent, u.shape[0] - 1, u.shape[1]),
                                 log_coeffs(u)))


_FACTORIALS = [math.factorial(i) for i in range(33)]


def factorials(order: int) -> np.ndarray:
    if order < len(_FACTORIALS):
        return np.array(_FACTORIALS[: order + 1], dtype=float)
    return np.array([math.factorial(i) for i in range(order + 1)], dtype=float)


@dataclass(frozen=True)
class Jet:
    """Value plus the first ``order`` derivatives of a function at a point.

    ``coeffs[j]`` is the Taylor coefficient ``h^(j)(point) / j!``; use
    :meth:`derivative` / :meth:`derivatives` for raw derivatives.
    """

    point: float
    coeffs: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> float:
        return self.coeffs[0]

    def derivative(self, j: int) -> float:
        """Raw derivative ``h^(j)(point)``."""
        if not 0 <= j <= self.order:
            raise IndexError(f"derivative order {j} outside 0..{self.order}")
        return self.coeffs[j] * math.factorial(j)

    def derivatives(self) -> tuple[float, ...]:
        return tuple(c * math.factorial(j) for j, c in enumerate(self.coeffs))

    @classmethod
    def variable(cls, point: float, order: int) -> "Jet":
        coeffs = [0.0] * (order + 1)
        coeffs[0] = float(point)
        if order >= 1:
            coeffs[1] = 1.0
        return cls(float(point), tuple(coeffs))

    @classmethod
    def constant(cls, value: float, point: float, order: int) -> "Jet":
        coeffs = [0.0] * (order + 1)
        coeffs[0] = float(value)
        return cls(float(point), tuple(coeffs))

    # -- arithmetic -------------------------------------------------------

    def _col(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=float).reshape(-1, 1)

    def _wrap(self, arr: np.ndarray) -> "Jet":
        return Jet(self.point, tuple(float(v) for v in arr[:, 0]))

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.point != self.point or other.order != self.order:
                raise ValueError("jet operands must share base point and order")
            return other
        return Jet.constant(float(other), self.point, self.order)

    def __add__(self, other):
        return self._wrap(self._col() + self._coerce(other)._col())

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self._col() - self._coerce(other)._col())

    def __rsub__(self, other):
        return self._wrap(self._coerce(other)._col() - self._col())

    def __neg__(self):
        return self._wrap(-self._col())

    def __mul__(self, other):
        return self._wrap(mul_coeffs(self._col(), self._coerce(other)._col()))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(div_coeffs(self._col(), self._coerce(other)._col()))

    def __rtruediv__(self, other):
        return self._wrap(div_coeffs(self._coerce(other)._col(), self._col()))

    def exp(self) -> "Jet":
        return self._wrap(exp_coeffs(self._col()))

    def log(self) -> "Jet":
        return self._wrap(log_coeffs(self._col()))

    def sqrt(self) -> "Jet":
        return self._wrap(sqrt_coeffs(self._col()))

    def sin(self) -> "Jet":
        return self._wrap(sincos_coeffs(self._col())[0])

    def cos(self) -> "Jet":
        return self._wrap(sincos_coeffs(self._col())[1])

    def powi(self, exponent: int) -> "Jet":
        return self._wrap(powi_coeffs(self._col(), exponent))
