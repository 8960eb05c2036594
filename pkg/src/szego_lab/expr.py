"""A small real-valued expression language.

Symbols, boundary symbols, test functions and radial weights are all given
as text such as ``"r*cos(theta)"`` or ``"2*(1-r^2)^3"``.  This module turns
that text into an immutable syntax tree and evaluates it, either on Python
floats or elementwise on numpy arrays.

Grammar (lowest to highest precedence)::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-" factor | power
    power  := atom ("^" factor)?
    atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

so ``^`` is right-associative and ``-x^2`` means ``-(x^2)``.

Evaluation never propagates NaN silently: the log of a non-positive number,
the square root of a negative number, division by zero and non-finite
powers raise :class:`~szego_lab.errors.EvaluationError`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import EvaluationError, ParseError

__all__ = [
    "Expr", "Num", "Var", "Const", "Neg", "BinOp", "Call",
    "parse", "evaluate", "free_variables", "serialize", "substitute",
    "FUNCTIONS", "CONSTANTS",
]

CONSTANTS = {"pi": math.pi, "e": math.e}

# name -> (min arity, max arity); None means unbounded
FUNCTIONS = {
    "sin": (1, 1), "cos": (1, 1), "tan": (1, 1), "exp": (1, 1),
    "log": (1, 1), "sqrt": (1, 1), "abs": (1, 1),
    "min": (1, None), "max": (1, None),
}


class Expr:
    """Base class for syntax-tree nodes. Nodes are frozen dataclasses."""

    def __str__(self):
        return serialize(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Const(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple


# --------------------------------------------------------------------------
# Tokenizer and recursive-descent parser

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


def _tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos, source)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source, variables):
        self.source = source
        self.tokens = _tokenize(source)
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.source)

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text or tok[0] != "op":
            found = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self.error(f"unexpected {tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self):
        tok = self.advance()
        kind, text, pos = tok
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "(":
                return self.call(text, tok)
            if text in CONSTANTS:
                return Const(text)
            if self.variables is not None and text not in self.variables:
                raise ParseError(f"unknown identifier {text!r}", pos, self.source)
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {found}", pos, self.source)

    def call(self, name, tok):
        if name not in FUNCTIONS:
            raise ParseError(f"unknown function {name!r}", tok[2], self.source)
        self.expect("(")
        args = [self.expr()]
        while self.peek()[0] == "op" and self.peek()[1] == ",":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        lo, hi = FUNCTIONS[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ParseError(
                f"function {name!r} takes {lo if hi == lo else f'at least {lo}'} "
                f"argument(s), got {len(args)}", tok[2], self.source)
        return Call(name, tuple(args))


def parse(source: str, variables: Iterable[str] | None = None) -> Expr:
    """Parse ``source`` into a syntax tree.

    Parameters
    ----------
    source : str
        Expression text.
    variables : iterable of str, optional
        If given, identifiers that are neither constants nor listed here are
        rejected with an ``unknown identifier`` error.
    """
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression", 0, source)
    allowed = None if variables is None else frozenset(variables)
    return _Parser(source, allowed).parse()


# --------------------------------------------------------------------------
# Tree utilities

def free_variables(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Neg):
        return free_variables(e.operand)
    if isinstance(e, BinOp):
        return free_variables(e.left) | free_variables(e.right)
    if isinstance(e, Call):
        out = frozenset()
        for a in e.args:
            out |= free_variables(a)
        return out
    return frozenset()


def serialize(e: Expr) -> str:
    """Render a tree as text that re-parses to the same tree."""
    if isinstance(e, Num):
        text = repr(float(e.value))
        return f"({text})" if e.value < 0 else text
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        return f"-{_wrap(e.operand)}"
    if isinstance(e, BinOp):
        return f"{_wrap(e.left)} {e.op} {_wrap(e.right)}"
    if isinstance(e, Call):
        return f"{e.name}({', '.join(serialize(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")


def _wrap(e):
    s = serialize(e)
    return f"({s})" if isinstance(e, (BinOp, Neg)) else s


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace variables by sub-trees."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Call):
        return Call(e.name, tuple(substitute(a, mapping) for a in e.args))
    return e


# --------------------------------------------------------------------------
# Evaluation

Value = Union[float, np.ndarray]


def evaluate(e: Expr, bindings: Mapping[str, Value]) -> Value:
    """Evaluate ``e`` with variables taken from ``bindings``.

    Bound values may be floats or numpy arrays (broadcast elementwise).
    Returns a float when every bound value used is scalar.
    """
    with np.errstate(all="ignore"):
        out = _eval(e, bindings)
    if isinstance(out, np.ndarray):
        if out.ndim == 0:
            return float(out)
        return out
    return float(out)


def _domain_error(what, node):
    return EvaluationError(f"{what} in '{serialize(node)}'", node)


def _eval(e, b):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Var):
        try:
            return b[e.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {e.name!r}", e) from None
    if isinstance(e, Neg):
        return -_eval(e.operand, b)
    if isinstance(e, BinOp):
        lhs = _eval(e.left, b)
        rhs = _eval(e.right, b)
        if e.op == "+":
            return np.add(lhs, rhs) if _is_arr(lhs, rhs) else lhs + rhs
        if e.op == "-":
            return np.subtract(lhs, rhs) if _is_arr(lhs, rhs) else lhs - rhs
        if e.op == "*":
            return np.multiply(lhs, rhs) if _is_arr(lhs, rhs) else lhs * rhs
        if e.op == "/":
            if np.any(np.asarray(rhs) == 0.0):
                raise _domain_error("division by zero", e)
            return np.divide(lhs, rhs) if _is_arr(lhs, rhs) else lhs / rhs
        if e.op == "^":
            out = np.power(np.asarray(lhs, dtype=float), rhs)
            if not np.all(np.isfinite(out)):
                raise _domain_error("power outside the real domain", e)
            return out if out.ndim else float(out)
        raise EvaluationError(f"unknown operator {e.op!r}", e)
    if isinstance(e, Call):
        args = [_eval(a, b) for a in e.args]
        return _call(e, args)
    raise TypeError(f"not an expression node: {e!r}")


def _is_arr(*xs):
    return any(isinstance(x, np.ndarray) for x in xs)


def _call(node, args):
    name = node.name
    if name in ("min", "max"):
        out = args[0]
        fn = np.minimum if name == "min" else np.maximum
        for a in args[1:]:
            out = fn(out, a)
        return out if _is_arr(*args) else float(out)
    x = args[0]
    if name == "log":
        if np.any(np.asarray(x) <= 0.0):
            raise _domain_error("log of a non-positive number", node)
        out = np.log(x)
    elif name == "sqrt":
        if np.any(np.asarray(x) < 0.0):
            raise _domain_error("sqrt of a negative number", node)
        out = np.sqrt(x)
    elif name == "sin":
        out = np.sin(x)
    elif name == "cos":
        out = np.cos(x)
    elif name == "tan":
        out = np.tan(x)
    elif name == "exp":
        out = np.exp(x)
    elif name == "abs":
        out = np.abs(x)
    else:  # pragma: no cover - parser rejects unknown names
        raise EvaluationError(f"unknown function {name!r}", node)
    return out if isinstance(x, np.ndarray) else float(out)
