"""Scalar expressions: recursive-descent parser, evaluator, printer.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-'? power
    power  := atom ('^' factor)?
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

A top-level ``lhs = rhs`` is read as ``lhs - rhs``.  Exponents must be
constant; integer exponents are evaluated by repeated multiplication so
negative bases work.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from . import jets
from .jets import Jet2, JetError

FUNCTIONS = ("exp", "ln", "sqrt", "sin", "cos", "abs")

SURFACE_VARS = frozenset("rst")
PARAM_VARS = frozenset("uv")
PDE_VARS = frozenset(("x", "y", "z", "p", "q", "r", "s", "t"))


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class EvalError(ArithmeticError):
    """Unbound variable or domain violation during evaluation."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()=]))"
)


def _tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, allowed):
        self.text = text
        self.allowed = None if allowed is None else frozenset(allowed)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, _byte_offset(self.text, tok[2]), self.text)

    def expect(self, sym):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != sym:
            self.fail(f"expected {sym!r}, found {tok[1] or 'end of input'!r}")
        return self.take()

    def top(self) -> Expr:
        lhs = self.expr()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "=":
            self.take()
            rhs = self.expr()
            lhs = BinOp("-", lhs, rhs)
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return lhs

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            exponent = self.factor()
            if free_vars(exponent):
                self.fail("exponent must be constant", tok)
            return BinOp("^", base, exponent)
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        kind, val, _ = tok
        if kind == "num":
            self.take()
            return Num(float(val))
        if kind == "ident":
            self.take()
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    self.fail(f"unknown function {val!r}", tok)
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in FUNCTIONS:
                self.fail(f"function {val!r} needs an argument", tok)
            if self.allowed is not None and val not in self.allowed:
                self.fail(f"unknown identifier {val!r}", tok)
            return Var(val)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.fail(f"unexpected {val or 'end of input'!r}")


def parse(text: str, allowed_vars=None) -> Expr:
    """Parse text into an AST; allowed_vars=None accepts any identifier."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0, text)
    return _Parser(text, allowed_vars).top()


def free_vars(e: Expr) -> frozenset:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, Num):
        return frozenset()
    if isinstance(e, Neg):
        return free_vars(e.operand)
    if isinstance(e, Call):
        return free_vars(e.arg)
    return free_vars(e.left) | free_vars(e.right)


def to_string(e: Expr) -> str:
    """Fully parenthesized text that parses back to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_string(e.operand)})"
    if isinstance(e, Call):
        return f"{e.func}({to_string(e.arg)})"
    return f"({to_string(e.left)} {e.op} {to_string(e.right)})"


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, mapping))
    if isinstance(e, Call):
        return Call(e.func, substitute(e.arg, mapping))
    return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))


# evaluation ----------------------------------------------------------------

def _float_fn(name, x):
    try:
        if name == "exp":
            return math.exp(x)
        if name == "ln":
            if x <= 0:
                raise EvalError(f"ln of {x!r}")
            return math.log(x)
        if name == "sqrt":
            if x <= 0:
                raise EvalError(f"sqrt of {x!r}")
            return math.sqrt(x)
        if name == "sin":
            return math.sin(x)
        if name == "cos":
            return math.cos(x)
        return abs(x)
    except OverflowError as exc:
        raise EvalError(str(exc)) from exc


_JET_FN = {
    "exp": jets.exp,
    "ln": jets.log,
    "sqrt": jets.sqrt,
    "sin": jets.sin,
    "cos": jets.cos,
    "abs": jets.absolute,
}


def _pow(base, rho: float):
    if rho.is_integer() and abs(rho) < 2**31:
        n = int(rho)
        if n < 0 and _is_zero(base):
            raise EvalError("negative power of zero")
        return jets.ipow(base, n)
    if isinstance(base, Jet2):
        return jets.power(base, rho)
    if base <= 0:
        raise EvalError(f"non-integer power of {base!r}")
    return math.pow(base, rho)


def _is_zero(x):
    return (x.value if isinstance(x, Jet2) else x) == 0


def evaluate(e: Expr, env: Mapping[str, object]):
    """Evaluate over floats or Jet2 values (floats act as constants)."""
    try:
        return _ev(e, env)
    except JetError as exc:
        raise EvalError(str(exc)) from exc
    except ZeroDivisionError as exc:
        raise EvalError("division by zero") from exc


def _ev(e, env):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Neg):
        return -_ev(e.operand, env)
    if isinstance(e, Call):
        x = _ev(e.arg, env)
        if isinstance(x, Jet2):
            return _JET_FN[e.func](x)
        return _float_fn(e.func, x)
    op = e.op
    if op == "^":
        return _pow(_ev(e.left, env), float(_ev(e.right, {})))
    a = _ev(e.left, env)
    b = _ev(e.right, env)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if not isinstance(b, Jet2) and b == 0:
        raise EvalError("division by zero")
    return a / b


# derivatives at a point -------------------------------------------------------

def directional(e: Expr, point: Mapping[str, float], direction: Mapping[str, float], order: int = 2):
    """Jet in one variable h of e(point + h*direction); returns the Jet2."""
    h = Jet2.var("u", (0.0, 0.0), order)
    env = {k: h * direction.get(k, 0.0) + float(v) for k, v in point.items()}
    return evaluate(e, env)


def gradient(e: Expr, point: Mapping[str, float], names):
    """Partial derivatives of e at point along the given variable names."""
    out = []
    for n in names:
        d = directional(e, point, {n: 1.0}, order=1)
        out.append(d.deriv(1, 0) if isinstance(d, Jet2) else 0.0)
    return out


def hessian(e: Expr, point: Mapping[str, float], names):
    k = len(names)
    H = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            env = {n: float(v) for n, v in point.items()}
            hu = Jet2.var("u", (0.0, 0.0), 2)
            hv = Jet2.var("v", (0.0, 0.0), 2)
            env[names[a]] = hu + float(point[names[a]])
            if a == b:
                val = evaluate(e, env)
                H[a, a] = val.deriv(2, 0) if isinstance(val, Jet2) else 0.0
            else:
                env[names[b]] = hv + float(point[names[b]])
                val = evaluate(e, env)
                H[a, b] = H[b, a] = val.deriv(1, 1) if isinstance(val, Jet2) else 0.0
    return H
