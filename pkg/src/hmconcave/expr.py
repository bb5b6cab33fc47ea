"""Tiny expression language for bound functions of one variable ``x``.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := power (('*' | '/') power)*
    power   := unary ('^' power)?          # right associative
    unary   := '-' unary | atom
    atom    := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'

Unary minus binds tighter than ``^``, so ``-x^2`` is ``(-x)^2``. ``**`` is
accepted as a synonym for ``^``. FUNC is ``exp`` or ``log``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

FUNCS = {"exp": np.exp, "log": np.log}


class ExprError(Exception):
    pass


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


class EvaluationError(ExprError, ArithmeticError):
    """An expression produced a non-finite value (pole, log of x <= 0, overflow)."""


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str = "x"


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

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>\*\*|[-+*/^()])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = mo.lastgroup
        if kind != "ws":
            val = mo.group()
            tokens.append((kind, "^" if val == "**" else val, pos))
        pos = mo.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, pos=None):
        return ExprSyntaxError(message, self.tok[2] if pos is None else pos, self.text)

    def accept(self, value) -> bool:
        if self.tok[0] == "op" and self.tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value):
        if not self.accept(value):
            found = self.tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.power()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            e = BinOp(op, e, self.power())
        return e

    def power(self):
        base = self.unary()
        if self.accept("^"):
            return BinOp("^", base, self.power())
        return base

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        kind, val, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(val))
        if kind == "name":
            self.i += 1
            if val == "x":
                return Var()
            if val in FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise self.error(f"unknown identifier {val!r}", pos)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        found = val or "end of input"
        raise self.error(f"expected an operand, found {found!r}")


def parse_expr(text: str) -> Expr:
    if not text.strip():
        raise ExprSyntaxError("empty expression", 0, text)
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
_NEG_PREC = 4
_ATOM_PREC = 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC[e.op]
    if isinstance(e, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_text(e: Expr) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    if isinstance(e, Num):
        s = _num(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.operand)
        return "-" + (f"({inner})" if _prec(e.operand) < _NEG_PREC else inner)
    p = _PREC[e.op]
    left, right = to_text(e.left), to_text(e.right)
    if e.op == "^":
        if _prec(e.left) <= p:
            left = f"({left})"
        if _prec(e.right) < p:
            right = f"({right})"
    else:
        if _prec(e.left) < p:
            left = f"({left})"
        if _prec(e.right) <= p:
            right = f"({right})"
    return f"{left}{'^' if e.op == '^' else f' {e.op} '}{right}"


def _ev(e: Expr, x, strict: bool):
    if isinstance(e, Num):
        v = np.float64(e.value)
    elif isinstance(e, Var):
        v = x
    elif isinstance(e, Neg):
        v = -_ev(e.operand, x, strict)
    elif isinstance(e, Call):
        v = FUNCS[e.func](_ev(e.arg, x, strict))
    else:
        a, b = _ev(e.left, x, strict), _ev(e.right, x, strict)
        if e.op == "+":
            v = a + b
        elif e.op == "-":
            v = a - b
        elif e.op == "*":
            v = a * b
        elif e.op == "/":
            v = a / b
        else:
            v = np.power(a, b)
    if strict and not np.all(np.isfinite(v)):
        raise EvaluationError(_explain(e, x))
    return v


def _explain(e: Expr, x) -> str:
    where = f"{to_text(e)!r} at x={x!r}"
    if isinstance(e, BinOp) and e.op == "/":
        return f"division by zero in {where}"
    if isinstance(e, Call) and e.func == "log":
        return f"log of a nonpositive argument in {where}"
    if isinstance(e, BinOp) and e.op == "^":
        return f"invalid or overflowing power in {where}"
    return f"non-finite value (overflow) in {where}"


def evaluate(e: Expr, x):
    """Vectorized evaluation; non-finite entries are left for the caller to flag."""
    x = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        v = _ev(e, x, strict=False)
    return np.broadcast_to(v, x.shape).astype(float, copy=True) if np.ndim(v) < x.ndim else v


def eval_expr(e: Expr, x: float) -> float:
    """Scalar evaluation raising :class:`EvaluationError` on non-finite results."""
    with np.errstate(all="ignore"):
        return float(_ev(e, np.float64(x), strict=True))

