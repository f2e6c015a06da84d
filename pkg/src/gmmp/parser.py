"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor | '/' INT)*
    factor := atom ('^' INT)?
    atom   := INT | VAR | '(' expr ')'

Juxtaposition (``2x``) is rejected.  Division is only allowed by a nonzero
integer literal, which is how rational coefficients are written.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Tuple

from .algebra import Polynomial, PolyRing


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^/()]))")


def _tokenize(src: str, line: int) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ParseError(f"unexpected character {src[col - 1]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start + 1))
        pos = m.end()
    toks.append(("end", "", n + 1))
    return toks


class _Parser:
    def __init__(self, src: str, ring: PolyRing, line: int):
        self.ring = ring
        self.line = line
        self.toks = _tokenize(src, line)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect(self, value):
        t = self.peek()
        if t[1] != value or t[0] != "op":
            self.error(f"expected {value!r}, found {t[1] or 'end of input'!r}")
        return self.take()

    def parse(self) -> Polynomial:
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            if t[0] in ("int", "var") or t[1] == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected token {t[1]!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in ("+", "-"):
                self.take()
                rhs = self.term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                acc = acc * self.factor()
            elif t[0] == "op" and t[1] == "/":
                self.take()
                d = self.peek()
                if d[0] != "int":
                    self.error("division is only allowed by an integer literal")
                self.take()
                if int(d[1]) == 0:
                    self.error("division by zero", d)
                acc = acc * self.ring.const(Fraction(1, int(d[1])))
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.peek()
            if e[0] != "int":
                self.error("malformed exponent: expected a non-negative integer")
            self.take()
            return base ** int(e[1])
        return base

    def atom(self) -> Polynomial:
        t = self.peek()
        if t[0] == "int":
            self.take()
            return self.ring.const(int(t[1]))
        if t[0] == "var":
            self.take()
            try:
                idx = self.ring.variables.index(t[1])
            except ValueError:
                self.error(f"unknown variable {t[1]!r}", t)
            return self.ring.var(idx)
        if t[0] == "op" and t[1] == "(":
            self.take()
            p = self.expr()
            self.expect(")")
            return p
        self.error(f"unexpected {t[1] or 'end of input'!r}")


def parse_poly(src: str, ring: PolyRing, line: int = 1) -> Polynomial:
    """Parse ``src`` into an exact Polynomial of ``ring``."""
    return _Parser(src, ring, line).parse()
