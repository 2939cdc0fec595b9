"""Recursive-descent parser for exact expressions in ``xi`` (and optionally ``xibar``).

Grammar, lowest precedence first::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" exponent)?          # right-associative
    atom   := INT | "i" | "xi" | "xibar" | "sqrt" "(" INT ")" | "(" expr ")"

Exponents must evaluate to nonnegative integer constants. The output of
``str()`` on polynomials and rational functions is accepted back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from .errors import DivisionByZero, ExpressionSyntaxError, NegativeExponent, NonHolomorphic
from .exact_scalar import RadicalScalar
from .symbolic import Polynomial, RationalFunction, VectorRF

RF = RationalFunction

_TOKEN = re.compile(r"(\d+)|(xibar|xi|sqrt|i)\b|(.)")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str, offset: int = 0) -> list[Token]:
    """Tokens with positions shifted by ``offset``."""
    out: list[Token] = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            out.append(Token("int", m.group(1), pos + offset))
        elif m.group(2) is not None:
            out.append(Token("name", m.group(2), pos + offset))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionSyntaxError(f"unexpected character {ch!r}", pos + offset)
            out.append(Token("op", ch, pos + offset))
        pos = m.end()
    out.append(Token("end", "", n + offset))
    return out


class _Parser:
    def __init__(self, text: str, allow_xibar: bool, offset: int = 0) -> None:
        self.text = text
        self.offset = offset
        self.tokens = tokenize(text, offset)
        self.i = 0
        self.allow_xibar = allow_xibar

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text or t.kind == "end":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ExpressionSyntaxError(f"expected {text!r}, found {found}", t.pos)
        return self.take()

    def parse(self) -> RF:
        if self.tok.kind == "end":
            raise ExpressionSyntaxError("empty expression", self.tok.pos)
        value = self.expr()
        if self.tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def expr(self) -> RF:
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RF:
        value = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.take()
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZero(f"division by zero at position {op.pos}")
                value = value / rhs
        return value

    def unary(self) -> RF:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            inner = self.unary()
            return -inner if op == "-" else inner
        return self.power()

    def power(self) -> RF:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            start = self.tok.pos
            if self.tok.kind == "op" and self.tok.text == "-":
                raise NegativeExponent(f"negative exponent at position {start}")
            exp = self.power()
            return base ** _exponent_value(exp, start)
        return base

    def atom(self) -> RF:
        t = self.tok
        if t.kind == "int":
            self.take()
            return RF.coerce(int(t.text))
        if t.kind == "name":
            self.take()
            if t.text == "i":
                return RF.coerce(RadicalScalar.imag_unit())
            if t.text == "xi":
                return RF.xi()
            if t.text == "xibar":
                if not self.allow_xibar:
                    raise NonHolomorphic(f"xibar at position {t.pos}: seed components must be holomorphic")
                return RF.xibar()
            # sqrt
            self.expect("(")
            arg = self.tok
            if arg.kind != "int":
                raise ExpressionSyntaxError("sqrt takes a positive integer literal", arg.pos)
            self.take()
            n = int(arg.text)
            if n <= 0:
                raise ExpressionSyntaxError("sqrt takes a positive integer literal", arg.pos)
            self.expect(")")
            return RF.coerce(RadicalScalar.sqrt(n))
        if t.kind == "op" and t.text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExpressionSyntaxError(f"expected a number, i, xi, sqrt or '(', found {found}", t.pos)


def _exponent_value(exp: RF, pos: int) -> int:
    if not exp.is_constant():
        raise ExpressionSyntaxError("exponent must be a constant", pos)
    c = exp.constant_value()
    if not c.is_rational():
        raise ExpressionSyntaxError("exponent must be an integer", pos)
    q = c.rational_part().re
    if q < 0:
        raise NegativeExponent(f"negative exponent at position {pos}")
    if q.denominator != 1:
        raise ExpressionSyntaxError("exponent must be an integer", pos)
    return int(q)


def parse_expression(text: str, allow_xibar: bool = True, offset: int = 0) -> RationalFunction:
    """Parse any expression in the grammar into an exact rational function."""
    return _Parser(text, allow_xibar, offset).parse()


def parse_polynomial(text: str, allow_xibar: bool = True, offset: int = 0) -> Polynomial:
    value = parse_expression(text, allow_xibar, offset)
    if not value.is_polynomial():
        raise ExpressionSyntaxError("expression is not a polynomial", offset)
    return value.num


def parse_seed_expression(text: str, offset: int = 0) -> Polynomial:
    """One holomorphic seed component; ``xibar`` is rejected."""
    return parse_polynomial(text, allow_xibar=False, offset=offset)


def split_components(text: str) -> list[tuple[str, int]]:
    """Split on top-level commas, keeping each piece's offset for error messages."""
    parts: list[tuple[str, int]] = []
    depth = 0
    start = 0
    for k, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((text[start:k], start))
            start = k + 1
    parts.append((text[start:], start))
    return parts


def parse_seed(text: str) -> VectorRF:
    """Comma-separated holomorphic components, e.g. ``"1, xi, xi^2"``."""
    return VectorRF(RF.coerce(parse_seed_expression(piece, offset)) for piece, offset in split_components(text))


def rational_literal(text: str) -> mpq:
    """``a``, ``-a`` or ``a/b`` as an exact rational."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?", text)
    if m is None:
        raise ExpressionSyntaxError(f"not a rational literal: {text!r}", 0)
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise DivisionByZero("zero denominator")
    return mpq(int(m.group(1)), den)
