"""Tokenizer and expression parser shared by polynomial parsing and the DSL.

An expression is a rational polynomial in the declared variables, optionally
multiplied into a linear combination of generator symbols.  Results are dicts
``{generator_name_or_None: Poly}``; the ``None`` key holds the pure scalar part.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from lcs.errors import ParseError, SemanticError
from lcs.poly import ONE, ZERO, Poly

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>(#|//)[^\n]*)"
    r"|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<punct>[{}\[\](),;=+\-*/^])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'ident', 'punct', 'eof'
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("num", "ident", "punct"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


Combo = dict  # dict[str | None, Poly]


def _add(a: Combo, b: Combo, sign: int = 1) -> Combo:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, ZERO) + (v if sign > 0 else -v)
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek
        return tok.kind in ("punct", "ident") and tok.text == text

    def expect(self, text: str) -> Token:
        tok = self.peek
        if not self.at(text):
            shown = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return self.next()

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek
        return ParseError(message, tok.line, tok.col)


class ExprParser:
    """Recursive descent over a token stream.

    ``symbols`` are generator names; ``variables`` the allowed polynomial
    variables (``None`` allows any lower-case identifier that is not a symbol).
    """

    def __init__(self, stream: TokenStream, symbols: Iterable[str], variables: Iterable[str] | None):
        self.s = stream
        self.symbols = set(symbols)
        self.variables = None if variables is None else set(variables)

    def parse(self) -> Combo:
        s = self.s
        sign = 1
        if s.at("+") or s.at("-"):
            sign = -1 if s.next().text == "-" else 1
        value = self.term()
        if sign < 0:
            value = {k: -v for k, v in value.items()}
        while s.at("+") or s.at("-"):
            op = s.next().text
            value = _add(value, self.term(), 1 if op == "+" else -1)
        return value

    def _starts_factor(self) -> bool:
        tok = self.s.peek
        return tok.kind in ("num", "ident") or (tok.kind == "punct" and tok.text == "(")

    def term(self) -> Combo:
        s = self.s
        value = self.factor()
        while True:
            if s.at("*"):
                s.next()
                value = self._mul(value, self.factor())
            elif s.at("/"):
                tok = s.next()
                div = self.factor()
                if set(div) - {None} or not div.get(None, ZERO).is_constant() or not div:
                    raise s.error("division only by a nonzero rational constant", tok)
                c = div[None].constant_term()
                value = {k: v.scale(1 / c) for k, v in value.items()}
            elif self._starts_factor():
                value = self._mul(value, self.factor())
            else:
                return value

    def _mul(self, a: Combo, b: Combo) -> Combo:
        if set(a) - {None} and set(b) - {None}:
            raise self.s.error("product of two generator terms is not linear")
        if set(b) - {None}:
            a, b = b, a
        scalar = b.get(None, ZERO)
        out = {}
        for k, v in a.items():
            p = v * scalar
            if not p.is_zero():
                out[k] = p
        return out

    def factor(self) -> Combo:
        s = self.s
        base_tok = s.peek
        value = self.atom()
        if s.at("^"):
            s.next()
            exp_tok = s.expect_kind("num", "integer exponent")
            if set(value) - {None}:
                raise s.error("cannot raise a generator to a power", base_tok)
            p = value.get(None, ZERO) ** int(exp_tok.text)
            value = {None: p} if not p.is_zero() else {}
        return value

    def atom(self) -> Combo:
        s = self.s
        tok = s.peek
        if tok.kind == "num":
            s.next()
            c = Fraction(int(tok.text))
            return {None: Poly.const(c)} if c else {}
        if tok.kind == "ident":
            s.next()
            if tok.text in self.symbols:
                return {tok.text: ONE}
            if self.variables is None or tok.text in self.variables:
                if self.variables is None and not tok.text[0].islower():
                    raise s.error(f"unknown generator {tok.text!r}", tok)
                return {None: Poly.var(tok.text)}
            raise SemanticError(f"unknown generator or variable {tok.text!r}", tok.line, tok.col)
        if s.at("("):
            s.next()
            value = self.parse()
            s.expect(")")
            return value
        shown = tok.text or "end of input"
        raise s.error(f"unexpected {shown!r} in expression", tok)


def parse_expression(text: str, symbols: Iterable[str] = (), variables: Iterable[str] | None = None) -> Combo:
    stream = TokenStream(tokenize(text))
    combo = ExprParser(stream, symbols, variables).parse()
    if stream.peek.kind != "eof":
        raise stream.error(f"unexpected {stream.peek.text!r} after expression")
    return combo
