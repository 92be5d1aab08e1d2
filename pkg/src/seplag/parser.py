"""Recursive-descent parser for polynomial potentials in q1, q2.

Grammar (whitespace insensitive)::

    expr     := term (("+" | "-") term)*
    term     := "-"? factor ("*" factor)*
    factor   := atom ("^" uint)?
    atom     := rational | "q1" | "q2" | "(" expr ")"
    rational := uint ("/" uint)?

Division only appears inside a rational literal, so every accepted string
denotes a polynomial with exact rational coefficients.  There is no implicit
multiplication: ``2q1`` is rejected.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError, ZeroDenominatorError
from .ratpoly import INT64_MAX, Poly2, Rat

_PUNCT = {
    "/": "slash",
    "*": "star",
    "+": "plus",
    "-": "minus",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
}


@dataclass(frozen=True)
class ExprToken:
    kind: str
    lexeme: str
    position: int


def tokenize(text: str) -> list[ExprToken]:
    """Split ``text`` into tokens, terminated by an ``eof`` token."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _PUNCT:
            tokens.append(ExprToken(_PUNCT[ch], ch, i))
            i += 1
        elif ch.isascii() and ch.isdigit():
            start = i
            while i < n and text[i].isascii() and text[i].isdigit():
                i += 1
            tokens.append(ExprToken("integer", text[start:i], start))
        elif ch == "q":
            name = text[i : i + 2]
            follow = text[i + 2 : i + 3]
            if name in ("q1", "q2") and not (follow.isalnum() or follow == "_"):
                tokens.append(ExprToken("var_" + name, name, i))
                i += 2
            else:
                j = i + 1
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                raise ParseError(i, "q1 or q2", text[i:j], text)
        else:
            raise ParseError(i, "number, variable, operator or parenthesis", ch, text)
    tokens.append(ExprToken("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> ExprToken:
        return self.tokens[self.pos]

    def advance(self) -> ExprToken:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.position, expected, t.lexeme or "end of input", self.text)

    def expect(self, kind: str, expected: str) -> ExprToken:
        if self.tok.kind != kind:
            self.fail(expected)
        return self.advance()

    def uint(self, expected: str = "integer") -> tuple[int, ExprToken]:
        t = self.expect("integer", expected)
        value = int(t.lexeme)
        if value > INT64_MAX:
            raise OverflowError(f"integer literal {t.lexeme} at offset {t.position} exceeds 64-bit range")
        return value, t

    def parse(self) -> Poly2:
        result = self.expr()
        if self.tok.kind != "eof":
            self.fail("operator or end of input")
        return result

    def expr(self) -> Poly2:
        acc = self.term()
        while self.tok.kind in ("plus", "minus"):
            op = self.advance().kind
            if op == "minus" and self.tok.kind == "minus":
                self.fail("term ('--' is not allowed)")
            rhs = self.term()
            acc = acc + rhs if op == "plus" else acc - rhs
        return acc

    def term(self) -> Poly2:
        negate = False
        if self.tok.kind == "minus":
            self.advance()
            negate = True
        acc = self.factor()
        while self.tok.kind == "star":
            self.advance()
            acc = acc * self.factor()
        return -acc if negate else acc

    def factor(self) -> Poly2:
        base = self.atom()
        if self.tok.kind == "caret":
            self.advance()
            n, _ = self.uint("integer exponent")
            base = base**n
        return base

    def atom(self) -> Poly2:
        t = self.tok
        if t.kind == "integer":
            num, _ = self.uint()
            den = 1
            if self.tok.kind == "slash":
                self.advance()
                den, dtok = self.uint("integer denominator")
                if den == 0:
                    raise ZeroDenominatorError(dtok.position, dtok.lexeme, self.text)
            return Poly2.const(Rat(num, den))
        if t.kind == "var_q1":
            self.advance()
            return Poly2.var(0)
        if t.kind == "var_q2":
            self.advance()
            return Poly2.var(1)
        if t.kind == "lparen":
            self.advance()
            inner = self.expr()
            self.expect("rparen", "')'")
            return inner
        self.fail("number, q1, q2 or '('")


def parse_potential(text: str) -> Poly2:
    """Parse a potential such as ``"1/2*(q1^2+q2^2)+q1^2*q2+1/3*q2^3"``.

    Raises :class:`ParseError` on syntax errors (with the offending offset),
    :class:`ZeroDenominatorError` for literals like ``1/0`` and
    :class:`OverflowError` when a literal or coefficient leaves 64-bit range.
    """
    if not text or not text.strip():
        raise ParseError(0, "expression", "end of input", text)
    return _Parser(text).parse()


def parse_rational(text: str) -> Rat:
    """Parse a signed rational literal ``-?uint(/uint)?`` (CLI selector values)."""
    p = _Parser(text)
    negate = p.tok.kind == "minus"
    if negate:
        p.advance()
    num, _ = p.uint("integer")
    den = 1
    if p.tok.kind == "slash":
        p.advance()
        den, dtok = p.uint("integer denominator")
        if den == 0:
            raise ZeroDenominatorError(dtok.position, dtok.lexeme, text)
    p.expect("eof", "end of rational literal")
    value = Rat(num, den)
    return -value if negate else value


def print_potential(p: Poly2) -> str:
    return p.render()
