"""Tiny closed-form expression language in one variable.

Grammar (EBNF)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' number)?
    atom   := 'x' | number | func '(' expr ')' | '(' expr ')' | '-' atom
    func   := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt'
    number := decimal literal, e.g. ``2``, ``0.5``, ``1.25e-3``

``*``/``/`` bind over ``+``/``-`` with left associativity, ``^`` binds
tightest among the binary operators, and unary minus lives at atom level
(so ``-x^2`` parses as ``(-x)^2``, exactly as the grammar forces).

Trees are immutable and hashable.  Evaluation is either plain
(:func:`evaluate`) or through truncated-Taylor jets (:func:`jet_eval`,
:func:`derivatives_on_grid`), which produce the value together with every
derivative up to a requested order in a single pass.

Exponents are constants only: integer exponents go through repeated
squaring of jets, non-integer ones through exp/log (positive base
required).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import jets
from .errors import EvalDomainError, ExprSyntaxError, UnknownIdentifierError

__all__ = [
    "Expr", "Var", "Num", "Unary", "Binary",
    "parse", "to_source", "evaluate", "jet_eval", "derivatives_on_grid",
    "X", "const", "add", "sub", "mul", "div", "neg", "powi", "call",
    "monomials", "taylor_monomials", "shift_argument", "linear_combination",
]

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


@dataclass(frozen=True)
class Var:
    """The single free variable ``x``."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Unary:
    op: str  # 'neg' or one of FUNCTIONS
    arg: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str  # '+', '-', '*', '/', '^' (rhs of '^' is always a Num)
    lhs: "Expr"
    rhs: "Expr"


Expr = Union[Var, Num, Unary, Binary]


# -- parsing ---------------------------------------------------------------

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN_RE = re.compile(
    rf"(?P<num>{_NUMBER})|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num', 'ident', one of '-+*/^()', or 'end'
    text: str
    offset: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        if m.lastgroup == "num":
            tokens.append(_Token("num", m.group(), pos))
        elif m.lastgroup == "ident":
            tokens.append(_Token("ident", m.group(), pos))
        else:
            tokens.append(_Token(m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.offset)
        return self.advance()

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance().kind
            node = Binary(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        node = self.atom()
        if self.peek().kind == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "num":
                raise ExprSyntaxError("expected numeric exponent after '^'", tok.offset)
            self.advance()
            node = Binary("^", node, Num(float(tok.text)))
        return node

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text == "x":
                return Var()
            if tok.text in FUNCTIONS:
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Unary(tok.text, inner)
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "-":
            self.advance()
            return Unary("neg", self.atom())
        raise ExprSyntaxError(
            f"expected an operand, found {tok.text or 'end of input'!r}", tok.offset)


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree.

    Raises :class:`ExprSyntaxError` (with the byte offset of the problem)
    on malformed input and :class:`UnknownIdentifierError` for identifiers
    other than ``x`` and the supported function names.
    """
    parser = _Parser(source)
    node = parser.expr()
    tok = parser.peek()
    if tok.kind != "end":
        raise ExprSyntaxError(f"unexpected trailing input {tok.text!r}", tok.offset)
    return node


# -- rendering -------------------------------------------------------------

_BIN_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
_NEG_PREC = 4
_ATOM_PREC = 5


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _BIN_PREC[e.op]
    if isinstance(e, Unary) and e.op == "neg":
        return _NEG_PREC
    return _ATOM_PREC


def _render(e: Expr, ctx: int) -> str:
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, Unary):
        if e.op == "neg":
            return "-" + _render(e.arg, _NEG_PREC)
        return f"{e.op}({_render(e.arg, 0)})"
    p = _BIN_PREC[e.op]
    if e.op == "^":
        text = f"{_render(e.lhs, _NEG_PREC)}^{_render(e.rhs, _ATOM_PREC)}"
    else:
        text = f"{_render(e.lhs, p)} {e.op} {_render(e.rhs, p + 1)}"
    return f"({text})" if p < ctx else text


def to_source(e: Expr) -> str:
    """Render a tree back to grammar-conformant source.

    Reparsing the result of a parsed tree reproduces the tree exactly.
    """
    return _render(e, 0)


# -- evaluation ------------------------------------------------------------

def evaluate(e: Expr, x: float) -> float:
    """Plain evaluation; equals ``jet_eval(e, x, 0).value``."""
    if isinstance(e, Var):
        return float(x)
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Unary):
        v = evaluate(e.arg, x)
        if e.op == "neg":
            return -v
        if e.op == "exp":
            return math.exp(v)
        if e.op == "log":
            if v <= 0.0:
                raise EvalDomainError(f"log of non-positive value {v}")
            return math.log(v)
        if e.op == "sin":
            return math.sin(v)
        if e.op == "cos":
            return math.cos(v)
        if v < 0.0:
            raise EvalDomainError(f"sqrt of negative value {v}")
        return math.sqrt(v)
    lv = evaluate(e.lhs, x)
    if e.op == "^":
        ev = e.rhs.value  # parser guarantees a Num exponent
        if float(ev).is_integer():
            if lv == 0.0 and ev < 0:
                raise EvalDomainError("zero base with negative exponent")
            return lv ** int(ev)
        if lv <= 0.0:
            raise EvalDomainError(f"non-integer power of non-positive base {lv}")
        return lv ** ev
    rv = evaluate(e.rhs, x)
    if e.op == "+":
        return lv + rv
    if e.op == "-":
        return lv - rv
    if e.op == "*":
        return lv * rv
    if rv == 0.0:
        raise EvalDomainError("division by zero")
    return lv / rv


def _coeffs(e: Expr, xs: np.ndarray, order: int) -> np.ndarray:
    if isinstance(e, Var):
        return jets.variable_coeffs(xs, order)
    if isinstance(e, Num):
        return jets.constant_coeffs(e.value, order, len(xs))
    if isinstance(e, Unary):
        a = _coeffs(e.arg, xs, order)
        if e.op == "neg":
            return -a
        if e.op == "exp":
            return jets.exp_coeffs(a)
        if e.op == "log":
            return jets.log_coeffs(a)
        if e.op == "sin":
            return jets.sincos_coeffs(a)[0]
        if e.op == "cos":
            return jets.sincos_coeffs(a)[1]
        return jets.sqrt_coeffs(a)
    if e.op == "^":
        base = _coeffs(e.lhs, xs, order)
        return jets.pow_coeffs(base, e.rhs.value)
    a = _coeffs(e.lhs, xs, order)
    b = _coeffs(e.rhs, xs, order)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return jets.mul_coeffs(a, b)
    return jets.div_coeffs(a, b)


def jet_eval(e: Expr, point: float, order: int) -> jets.Jet:
    """Evaluate ``e`` and its derivatives up to ``order`` at ``point``.

    Exact for polynomial trees (up to rounding), correct to rounding for
    the transcendental functions.  Raises :class:`EvalDomainError` when a
    subexpression is evaluated outside its domain.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    col = _coeffs(e, np.array([float(point)]), order)
    return jets.Jet(float(point), tuple(float(v) for v in col[:, 0]))


def derivatives_on_grid(e: Expr, xs: np.ndarray, order: int) -> np.ndarray:
    """Raw derivatives ``e^(j)(xs)`` for ``j = 0..order``.

    Returns an array of shape ``(order + 1, len(xs))``; one expression
    walk serves the whole grid, which is what makes dense scans cheap.
    """
    xs = np.asarray(xs, dtype=float)
    coeffs = _coeffs(e, xs, order)
    return coeffs * jets.factorials(order)[:, None]


# -- tree builders ---------------------------------------------------------

X = Var()


def const(value: float) -> Num:
    return Num(float(value))


def add(a: Expr, b: Expr) -> Binary:
    return Binary("+", a, b)


def sub(a: Expr, b: Expr) -> Binary:
    return Binary("-", a, b)


def mul(a: Expr, b: Expr) -> Binary:
    return Binary("*", a, b)


def div(a: Expr, b: Expr) -> Binary:
    return Binary("/", a, b)


def neg(a: Expr) -> Unary:
    return Unary("neg", a)


def powi(base: Expr, exponent: int) -> Expr:
    """Integer power; negative exponents become an explicit reciprocal."""
    if exponent < 0:
        return div(const(1.0), Binary("^", base, Num(float(-exponent))))
    if exponent == 1:
        return base
    return Binary("^", base, Num(float(exponent)))


def call(name: str, arg: Expr) -> Unary:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    return Unary(name, arg)


def monomials(count: int) -> tuple[Expr, ...]:
    """``1, x, x^2, ..., x^(count-1)``."""
    return tuple(const(1.0) if i == 0 else powi(X, i) for i in range(count))


def taylor_monomials(center: float, count: int) -> tuple[Expr, ...]:
    """``(x - center)^i / i!`` for ``i = 0..count-1``."""
    t = X if center == 0.0 else sub(X, const(center))
    out: list[Expr] = []
    for i in range(count):
        if i == 0:
            out.append(const(1.0))
        elif i == 1:
            out.append(t)
        else:
            out.append(div(powi(t, i), const(float(math.factorial(i)))))
    return tuple(out)


def shift_argument(e: Expr, delta: float) -> Expr:
    """Substitute ``x -> x + delta`` throughout the tree."""
    if delta == 0.0:
        return e
    if isinstance(e, Var):
        return add(X, const(delta))
    if isinstance(e, Num):
        return e
    if isinstance(e, Unary):
        return Unary(e.op, shift_argument(e.arg, delta))
    if e.op == "^":
        return Binary("^", shift_argument(e.lhs, delta), e.rhs)
    return Binary(e.op, shift_argument(e.lhs, delta), shift_argument(e.rhs, delta))


def linear_combination(coeffs, funcs) -> Expr:
    """``sum(c_i * f_i)``; the empty combination is the zero constant."""
    acc: Expr | None = None
    for c, f in zip(coeffs, funcs, strict=True):
        term = mul(const(float(c)), f)
        acc = term if acc is None else add(acc, term)
    return acc if acc is not None else const(0.0)
