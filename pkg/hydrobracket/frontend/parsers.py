"""
Text parsers: exact rational literals, rational grids and polynomial expressions.

Polynomial grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | RATIONAL | VARIABLE | "(" expr ")"

with ``RATIONAL`` written ``p/q`` and ``VARIABLE`` written ``u1``..``uN`` (``u^1`` is read as ``u1``).
Multiplication must be explicit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence

from envolved.parsers import CollectionParser

from hydrobracket.algebra.poly import Poly
from hydrobracket.exceptions import PolyParseError

__all__ = ["parse_poly", "parse_rational_grid", "parse_scalar", "print_canonical"]

_scalar_pattern = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")


def parse_scalar(x: str) -> Fraction:
    """
    Parse an integer or a rational literal p/q into an exact value.
    """
    match = _scalar_pattern.fullmatch(x)
    if match is None:
        raise ValueError(f"expected an integer or a rational p/q, got {x!r}")
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"zero denominator in {x!r}")
    return Fraction(int(numerator), int(denominator or 1))


_row_parser: CollectionParser[List[Fraction], Fraction] = CollectionParser(re.compile(r"\s*,\s*|\s+"), parse_scalar)
_grid_parser: CollectionParser[List[List[Fraction]], List[Fraction]] = CollectionParser(";", _row_parser)
_bracketed_grid_parser: CollectionParser[List[List[Fraction]], List[Fraction]] = CollectionParser(
    ";", _row_parser, opener=re.compile(r"\[\s*"), closer="]"
)


def parse_rational_grid(x: str) -> List[List[Fraction]]:
    """
    Parse a matrix written as rows separated by ``;`` with entries separated by ``,`` or whitespace,
    optionally enclosed in brackets, e.g. ``"0,0,1; 0,1,0; 1,0,0"``.
    """
    x = x.strip()
    grid = (_bracketed_grid_parser if x.startswith("[") else _grid_parser)(x)
    if any(not row for row in grid):
        raise ValueError(f"empty row in {x!r}")
    return grid


_token_pattern = re.compile(
    r"""
    (?P<space>[ \t\r\n]+)
    |(?P<rational>\d+/\d+)
    |(?P<integer>\d+)
    |(?P<variable>u\^?(?P<index>\d+))
    |(?P<op>[-+*^()])
    |(?P<slash>/)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(src: str) -> Iterator[_Token]:
    pos = 0
    line = 1
    line_start = 0
    while pos < len(src):
        match = _token_pattern.match(src, pos)
        column = pos - line_start + 1
        if match is None:
            raise PolyParseError(f"unexpected character {src[pos]!r}", line, column)
        kind = match.lastgroup
        text = match.group()
        if kind == "slash":
            raise PolyParseError("division is only allowed inside rational literals p/q", line, column)
        if kind == "space":
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rfind("\n") + 1
        else:
            yield _Token(kind or "", text, line, column)
        pos = match.end()
    yield _Token("end", "", line, len(src) - line_start + 1)


_atom_starts = ("integer", "rational", "variable")


class _PolyParser:
    def __init__(self, src: str, dim: int):
        self.tokens: Sequence[_Token] = list(_tokenize(src))
        self.pos = 0
        self.dim = dim

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def error(self, message: str, token: Optional[_Token] = None) -> PolyParseError:
        token = token or self.current
        return PolyParseError(message, token.line, token.column)

    def at_op(self, ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> Poly:
        ret = self.expr()
        if self.current.kind != "end":
            if self.at_op(")"):
                raise self.error("unbalanced ')'")
            raise self.error(f"unexpected {self.current.text!r}")
        return ret

    def expr(self) -> Poly:
        ret = self.term()
        while self.at_op("+-"):
            op = self.advance()
            rhs = self.term()
            ret = ret + rhs if op.text == "+" else ret - rhs
        return ret

    def term(self) -> Poly:
        ret = self.unary()
        while True:
            if self.at_op("*"):
                self.advance()
                ret = ret * self.unary()
            elif self.current.kind in _atom_starts or self.at_op("("):
                raise self.error("implicit multiplication is not allowed, use '*'")
            else:
                return ret

    def unary(self) -> Poly:
        if self.at_op("+-"):
            op = self.advance()
            operand = self.unary()
            return -operand if op.text == "-" else operand
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if not self.at_op("^"):
            return base
        self.advance()
        exponent = self.current
        if exponent.kind != "integer":
            raise self.error("exponents must be non-negative integer literals", exponent)
        self.advance()
        if self.at_op("^"):
            raise self.error("chained exponents are ambiguous, use parentheses")
        return base ** int(exponent.text)

    def atom(self) -> Poly:
        token = self.current
        if token.kind == "integer":
            self.advance()
            return Poly.constant(self.dim, int(token.text))
        if token.kind == "rational":
            self.advance()
            try:
                return Poly.constant(self.dim, parse_scalar(token.text))
            except ValueError as e:
                raise self.error(str(e), token) from e
        if token.kind == "variable":
            self.advance()
            index = int(token.text.lstrip("u^"))
            if not 1 <= index <= self.dim:
                raise self.error(f"variable {token.text} out of range for u1..u{self.dim}", token)
            return Poly.variable(self.dim, index - 1)
        if self.at_op("("):
            self.advance()
            ret = self.expr()
            if not self.at_op(")"):
                raise self.error("expected ')'")
            self.advance()
            return ret
        if token.kind == "end":
            raise self.error("unexpected end of expression")
        raise self.error(f"unexpected {token.text!r}")


def parse_poly(src: str, dim: int) -> Poly:
    """
    Parse a polynomial expression in u1..u{dim}.

    :raises PolyParseError: with the line and column of the offending token.
    """
    return _PolyParser(src, dim).parse()


def print_canonical(p: Poly) -> str:
    """
    The canonical, byte-for-byte reproducible text of a polynomial; parse_poly reads it back unchanged.
    """
    return str(p)