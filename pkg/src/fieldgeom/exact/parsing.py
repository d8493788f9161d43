"""Parser for rational-function expressions.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') unary)?
    atom   := INTEGER | VARIABLE | '(' expr ')'

Variables are ``t1 .. tn`` or the labels of an extension; exponents must
evaluate to integer constants.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ExprSyntaxError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, text: str, nvars: int, labels: Sequence[str] | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars
        self.text = text
        names = {f"t{k + 1}": k for k in range(nvars)}
        if labels:
            names.update({lab: k for k, lab in enumerate(labels)})
        self.names = names

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ExprSyntaxError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> RatFunc:
        value = self.expr()
        if self.peek()[0] != "end":
            raise ExprSyntaxError(f"trailing input in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ExprSyntaxError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.unary()
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exp = self.unary()
            if not exp.is_constant() or Fraction(exp.constant_value()).denominator != 1:
                raise ExprSyntaxError(f"non-integer exponent in {self.text!r}")
            k = int(exp.constant_value())
            if k < 0 and base.is_zero():
                raise ExprSyntaxError(f"division by zero in {self.text!r}")
            return base ** k
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return RatFunc.const(val, self.nvars)
        if kind == "name":
            if val not in self.names:
                raise ExprSyntaxError(f"unknown variable {val!r} in {self.text!r}")
            return RatFunc.var(self.names[val], self.nvars)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ExprSyntaxError(f"unexpected end of input in {self.text!r}")
        raise ExprSyntaxError(f"unexpected token {val!r} in {self.text!r}")


def parse_expr(text: str, nvars: int, labels: Sequence[str] | None = None) -> RatFunc:
    """Parse ``text`` into a reduced :class:`RatFunc` in ``nvars`` variables."""
    if not isinstance(text, str):
        raise ExprSyntaxError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text, nvars, labels).parse()
