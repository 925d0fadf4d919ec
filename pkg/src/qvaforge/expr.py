"""Recursive-descent parser for bicharacter entries.

Grammar (usual precedence, ``^`` binds tightest and takes an integer)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | NAME | "(" expr ")"

Rational constants are written as quotients, e.g. ``3/4``.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DisallowedPole, DivisionOutsideRing, ExprSyntaxError, UnknownVariable
from .fnring import INDEX, RatFn

NAMES = tuple(INDEX) + ("t",)


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", start)
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ExprSyntaxError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Bin(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            arg = self.unary()
            return Neg(arg) if tok[1] == "-" else arg
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            tok = self.take()
            if tok[0] != "num":
                raise ExprSyntaxError("exponent must be an integer", tok[2])
            return Pow(base, sign * int(tok[1]))
        return base

    def atom(self):
        tok = self.take()
        kind, text, pos = tok
        if kind == "num":
            return Num(Fraction(text))
        if kind == "name":
            if text not in NAMES:
                raise UnknownVariable(f"unknown variable {text!r} at position {pos}")
            return Var(text)
        if text == "(":
            node = self.expr()
            self.take(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse_ast(text):
    p = _Parser(text)
    node = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2])
    return node


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node):
    """Print an AST so that parsing the text gives the same AST back."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        return f"-({inner})" if isinstance(node.arg, Bin) else f"-{inner}"
    if isinstance(node, Pow):
        base = to_text(node.base)
        if not isinstance(node.base, (Var, Num)):
            base = f"({base})"
        return f"{base}^{node.exp}"
    p = _PREC[node.op]
    left = to_text(node.left)
    if isinstance(node.left, Bin) and _PREC[node.left.op] < p:
        left = f"({left})"
    right = to_text(node.right)
    if isinstance(node.right, Bin) and _PREC[node.right.op] <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}" if p == 1 else f"{left}{node.op}{right}"


def lower(node, T=None):
    """Evaluate an AST to a RatFn truncated at ``t^T``."""
    if isinstance(node, Num):
        return RatFn.const(node.value, T)
    if isinstance(node, Var):
        return RatFn.t(T) if node.name == "t" else RatFn.var(node.name, T)
    if isinstance(node, Neg):
        return -lower(node.arg, T)
    if isinstance(node, Pow):
        base = lower(node.base, T)
        if node.exp < 0:
            return _div(RatFn.const(1, T), base ** (-node.exp))
        return base ** node.exp
    a, b = lower(node.left, T), lower(node.right, T)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return _div(a, b)


def _div(a, b):
    try:
        return a / b
    except DivisionOutsideRing as exc:
        raise DisallowedPole(f"disallowed pole: {exc}", factor=exc.factor) from None


def parse_expr(text, T=None):
    return lower(parse_ast(text), T)
