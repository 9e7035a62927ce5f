"""Textual polynomial grammar of the command-line interface.

    expr        := ['-'] term (('+' | '-') term)*
    term        := factor ('*' factor)*
    factor      := coefficient | variable ('^' natural)?
    coefficient := integer | integer '/' positive-integer

Variables are identifiers declared by the input document; coefficients
are exact rationals.  The leading minus is accepted so that printed
polynomials always re-parse; printing then parsing is the identity on
polynomials (and parse errors carry line and column).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .jet_engine import Poly


@dataclass(frozen=True)
class Token:
    kind: str   # "number" | "name" | "op" | "end"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(Token("number", text[start:i], line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("name", text[start:i], line, col))
            col += i - start
            continue
        if ch in "+-*/^":
            tokens.append(Token("op", ch, line, col))
            col += 1
            i += 1
            continue
        raise InputError(f"syntax error at line {line}, column {col}: "
                         f"unexpected character {ch!r}")
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = list(variables)
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variable names")
        self.var_index = {v: i for i, v in enumerate(self.variables)}

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, tok: Token, what: str):
        raise InputError(f"syntax error at line {tok.line}, column "
                         f"{tok.column}: {what}")

    def parse(self) -> Poly:
        d = len(self.variables)
        poly = Poly.zero(d)
        sign = 1
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            sign = -1
        poly = poly + self.term() * sign
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take()
            poly = poly + self.term() * (1 if op.text == "+" else -1)
        tok = self.peek()
        if tok.kind != "end":
            self.fail(tok, f"unexpected {tok.text!r}")
        return poly

    def term(self) -> Poly:
        poly = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            poly = poly * self.factor()
        return poly

    def factor(self) -> Poly:
        d = len(self.variables)
        tok = self.take()
        if tok.kind == "number":
            num = int(tok.text)
            if self.peek().kind == "op" and self.peek().text == "/":
                self.take()
                den_tok = self.take()
                if den_tok.kind != "number" or int(den_tok.text) == 0:
                    self.fail(den_tok, "expected a positive integer denominator")
                return Poly.constant(d, Fraction(num, int(den_tok.text)))
            return Poly.constant(d, Fraction(num))
        if tok.kind == "name":
            if tok.text not in self.var_index:
                self.fail(tok, f"unknown variable {tok.text!r}")
            v = self.var_index[tok.text]
            exponent = 1
            if self.peek().kind == "op" and self.peek().text == "^":
                self.take()
                exp_tok = self.take()
                if exp_tok.kind == "op" and exp_tok.text == "-":
                    self.fail(exp_tok, "negative exponent")
                if exp_tok.kind != "number":
                    self.fail(exp_tok, "expected a natural number exponent")
                exponent = int(exp_tok.text)
            exp = [0] * d
            exp[v] = exponent
            return Poly(d, {tuple(exp): 1})
        self.fail(tok, "expected a coefficient or a variable")


def parse_polynomial(text: str, variables: Sequence[str]) -> Poly:
    """Parse the grammar above into an exact-coefficient polynomial."""
    if not text.strip():
        raise InputError("empty polynomial text")
    return _Parser(text, variables).parse()


def print_polynomial(poly: Poly, variables: Sequence[str]) -> str:
    """Canonical text form: terms sorted by exponent (descending), each
    as coefficient * var^e factors.  Round-trips through the parser."""
    if poly.nvars != len(variables):
        raise InputError("variable list does not match the polynomial")
    if poly.is_zero:
        return "0"
    parts = []
    for exp in sorted(poly.terms, reverse=True):
        coeff = poly.terms[exp]
        factors = []
        for v, e in enumerate(exp):
            if e == 1:
                factors.append(variables[v])
            elif e > 1:
                factors.append(f"{variables[v]}^{e}")
        body = "1" if not factors else " * ".join(factors)
        c = Fraction(coeff) if poly.field is None else Fraction(int(coeff))
        mag = -c if c < 0 else c
        if factors and mag == 1:
            piece = body
        else:
            coeff_text = str(mag.numerator) if mag.denominator == 1 else \
                f"{mag.numerator}/{mag.denominator}"
            piece = coeff_text if not factors else f"{coeff_text} * {body}"
        parts.append(("-" if c < 0 else "+", piece))
    sign0, piece0 = parts[0]
    out = piece0 if sign0 == "+" else f"-{piece0}"
    for sign, piece in parts[1:]:
        out += f" {sign} {piece}"
    return out


@dataclass(frozen=True)
class PolyExpr:
    """A parsed polynomial together with its source text."""

    source: str
    variables: tuple[str, ...]
    poly: Poly

    @staticmethod
    def make(source: str, variables: Sequence[str]) -> "PolyExpr":
        return PolyExpr(source, tuple(variables),
                        parse_polynomial(source, variables))
