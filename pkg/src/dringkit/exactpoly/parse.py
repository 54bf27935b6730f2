"""Recursive-descent parser for polynomial and rational-function expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor | '/' factor)*
    factor := base ('^' natural)?
    base   := name | integer | '(' expr ')'

A rational literal ``a/b`` is just integer division handled by ``term``.
A leading unary sign is accepted on any term so that printed output
(``-x^2 + y``) parses back.
"""

from __future__ import annotations

import re
from typing import Sequence

from .fields import Domain, QuotientRing
from .poly import MultiPoly, PolyRing
from .ratfunc import RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.message = message
        self.text = text
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, sym = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(("num", num, start))
        elif name is not None:
            toks.append(("name", name, start))
        else:
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r}", text, start)
            toks.append(("sym", sym, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0
        K = ring.domain
        self.constants = {}
        if isinstance(K, QuotientRing) and K.var not in ring.vars:
            self.constants[K.var] = K.gen

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self):
        if self.peek()[0] == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.signed_term()
        while self.peek()[:2] in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def signed_term(self):
        tok = self.peek()
        if tok[:2] == ("sym", "-"):
            self.take()
            return -self.term()
        if tok[:2] == ("sym", "+"):
            self.take()
        return self.term()

    def term(self):
        v = self.factor()
        while self.peek()[:2] in (("sym", "*"), ("sym", "/")):
            op = self.take()
            f = self.factor()
            if op[1] == "*":
                v = v * f
            else:
                v = self._divide(v, f, op)
        return v

    def _divide(self, v, f, tok):
        if not f:
            self.error("division by zero polynomial", tok)
        if isinstance(f, MultiPoly) and f.is_constant():
            try:
                return v * (self.ring.domain.one / f.constant_value())
            except ZeroDivisionError:
                self.error("division by zero polynomial", tok)
        if not self.ring.domain.is_field:
            self.error("division by a polynomial needs a field of coefficients", tok)
        if isinstance(f, MultiPoly):
            f = RationalFunction(f)
        if isinstance(v, MultiPoly):
            v = RationalFunction(v, _reduced=True)
        out = v / f
        return out

    def factor(self):
        v = self.base()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a natural number", tok)
            v = v ** int(tok[1])
        return v

    def base(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.constant(int(val))
        if kind == "name":
            if val in self.ring._index:
                return self.ring.gen(val)
            if val in self.constants:
                return self.ring.constant(self.constants[val])
            self.error(f"unknown variable {val!r}", tok)
        if (kind, val) == ("sym", "("):
            v = self.expr()
            if self.take()[:2] != ("sym", ")"):
                self.error("expected ')'", self.toks[self.i - 1])
            return v
        if kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected token {val!r}", tok)


def parse_expression(text: str, variables: Sequence[str] | PolyRing, domain: Domain | None = None):
    """Parse ``text`` into a :class:`MultiPoly` or :class:`RationalFunction`.

    ``variables`` is either a ring or a list of names (then ``domain`` is the
    coefficient domain).  An empty variable list with a :class:`QuotientRing`
    domain returns a bare element of that ring.
    """
    if isinstance(variables, PolyRing):
        ring = variables
    else:
        if domain is None:
            raise ValueError("a coefficient domain is required")
        ring = PolyRing(domain, list(variables))
    value = _Parser(text, ring).parse()
    if isinstance(value, RationalFunction) and value.denominator.is_constant():
        value = value.numerator * (ring.domain.one / value.denominator.constant_value())
    if not ring.vars and isinstance(value, MultiPoly):
        return value.constant_value()
    return value


def format_expression(value) -> str:
    return str(value)
