"""Concrete syntax: a lexer and recursive descent parser for distributions
and types.

Distributions are sums of optionally scaled summands: `1/sqrt2 * inl * +
1/sqrt2 * inr *`.  Scalars must be written without internal spaces (`0.5`,
`3/4`, `1/sqrt2`, `0.5-0.5i`, `2i`); the `+` between summands is always
spaced apart from them in printed output, so the two readings never collide.
`*` is the unit value where a term is expected and multiplication after a
scalar.  Application is juxtaposition and binds tighter than `;`, which binds
tighter than summand `+`.  A lambda body extends as far right as possible.
Types: `#` binds tightest, then `*`, then `+`, then `->`; `U` is the unit
type and `B` abbreviates `U+U` on input (printed expanded).  `--` starts a
comment.
"""

from __future__ import annotations

import math
import re
from bisect import bisect_right
from dataclasses import dataclass

from .syntax import (
    Distribution,
    Lam,
    Var,
    Void,
    add,
    canonicalize,
    mk_app,
    mk_inl,
    mk_inr,
    mk_let,
    mk_match,
    mk_pair,
    mk_seq,
    scale,
    show_dist,
    singleton,
)
from .typecheck import ErrorKind, TypeCheckError
from .types import Arrow, BOOL, Prod, Sharp, Sum, Type, UNIT


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan | None = None):
        at = f"line {span.line}, column {span.column}: " if span else ""
        super().__init__(at + message)
        self.message = message
        self.span = span


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    span: SourceSpan


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_SCALAR_RE = re.compile(rf"({_NUM})(?:(/sqrt2)|/({_NUM})|([+-]{_NUM})i|(i))?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_KEYWORDS = frozenset({"let", "in", "match", "inl", "inr"})
_SINGLES = frozenset("\\.(),;+*={}|:#")


def _lex(text: str) -> list[_Token]:
    line_starts = [0] + [i + 1 for i, ch in enumerate(text) if ch == "\n"]

    def span(start: int, end: int) -> SourceSpan:
        ln = bisect_right(line_starts, start)
        return SourceSpan(start, end, ln, start - line_starts[ln - 1] + 1)

    toks: list[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
            continue
        if ch == "-":
            if text.startswith("->", pos):
                toks.append(_Token("->", "->", span(pos, pos + 2)))
                pos += 2
                continue
            if text.startswith("--", pos):
                nl = text.find("\n", pos)
                pos = n if nl < 0 else nl + 1
                continue
            toks.append(_Token("-", "-", span(pos, pos + 1)))
            pos += 1
            continue
        if ch.isdigit() or (ch == "." and pos + 1 < n and text[pos + 1].isdigit()):
            m = _SCALAR_RE.match(text, pos)
            if not m or m.start() != pos:
                raise ParseError(f"bad number at {text[pos:pos + 8]!r}", span(pos, pos + 1))
            num = float(m.group(1))
            if m.group(2):
                value: complex | float = num / math.sqrt(2)
            elif m.group(3):
                denom = float(m.group(3))
                if denom == 0:
                    raise ParseError("zero denominator in scalar", span(pos, m.end()))
                value = num / denom
            elif m.group(4):
                value = complex(num, float(m.group(4)))
            elif m.group(5):
                value = complex(0.0, num)
            else:
                value = num
            toks.append(_Token("scalar", value, span(pos, m.end())))
            pos = m.end()
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            name = m.group(0)
            kind = name if name in _KEYWORDS else "ident"
            toks.append(_Token(kind, name, span(pos, m.end())))
            pos = m.end()
            continue
        if ch in _SINGLES:
            toks.append(_Token(ch, ch, span(pos, pos + 1)))
            pos += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", span(pos, pos + 1))
    toks.append(_Token("eof", None, span(n, n)))
    return toks


_ATOM_STARTS = frozenset({"*", "ident", "(", "inl", "inr"})


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.tokens[self.pos].kind == kind

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            found = "end of input" if tok.kind == "eof" else repr(tok.value)
            raise ParseError(f"expected {what}, found {found}", tok.span)
        return self.take()

    # -- distributions ------------------------------------------------------

    def dist(self) -> Distribution:
        parts = [self.summand()]
        while self.at("+"):
            self.take()
            parts.append(self.summand())
        return parts[0] if len(parts) == 1 else add(*parts)

    def summand(self) -> Distribution:
        neg = False
        if self.at("-"):
            self.take()
            neg = True
        coeff: complex | float = 1
        scaled = False
        if self.at("scalar"):
            coeff = self.take().value  # type: ignore[assignment]
            scaled = True
            self.expect("*", "'*' after a scalar coefficient")
        body = self.seq_term()
        if neg:
            coeff = -coeff
        if scaled or neg:
            return scale(coeff, body)
        return body

    def seq_term(self) -> Distribution:
        first = self.head_term()
        if self.at(";"):
            self.take()
            tail = self.seq_term()
            return mk_seq(first, tail)
        return first

    def head_term(self) -> Distribution:
        tok = self.peek()
        if tok.kind == "\\":
            self.take()
            name = self.expect("ident", "a parameter name").value
            self.expect(":", "':' and a parameter type")
            ann = self.type_expr()
            self.expect(".", "'.' after the parameter type")
            body = self.dist()
            return singleton(Lam(name, ann, body))
        if tok.kind == "let":
            self.take()
            self.expect("(", "'(' after let")
            x = self.expect("ident", "a name").value
            self.expect(",", "',' between the pair names")
            y = self.expect("ident", "a name").value
            self.expect(")", "')' after the pair names")
            self.expect("=", "'='")
            scrut = self.dist()
            self.expect("in", "'in'")
            body = self.dist()
            try:
                return mk_let(x, y, scrut, body)
            except ValueError as e:
                raise ParseError(str(e), tok.span) from None
        if tok.kind == "match":
            self.take()
            scrut = self.dist()
            self.expect("{", "'{' after the matched term")
            self.expect("inl", "'inl'")
            x1 = self.expect("ident", "a name").value
            self.expect("->", "'->'")
            b1 = self.dist()
            self.expect("|", "'|' between the branches")
            self.expect("inr", "'inr'")
            x2 = self.expect("ident", "a name").value
            self.expect("->", "'->'")
            b2 = self.dist()
            self.expect("}", "'}' after the branches")
            return mk_match(scrut, x1, b1, x2, b2)
        return self.app_term()

    def app_term(self) -> Distribution:
        cur = self.atom()
        while self.peek().kind in _ATOM_STARTS:
            tok = self.peek()
            arg = self.atom()
            summands = cur.summands
            if len(summands) != 1 or summands[0][0] != 1:
                raise TypeCheckError(
                    ErrorKind.HEAD_NOT_PURE,
                    "the operator of an application must be a single unscaled term",
                    span=tok.span,
                )
            cur = mk_app(summands[0][1], arg)
        return cur

    def atom(self) -> Distribution:
        tok = self.peek()
        if tok.kind == "*":
            self.take()
            return singleton(Void())
        if tok.kind == "ident":
            self.take()
            return singleton(Var(tok.value))
        if tok.kind in ("inl", "inr"):
            self.take()
            arg = self.atom()
            try:
                return mk_inl(arg) if tok.kind == "inl" else mk_inr(arg)
            except ValueError:
                raise ParseError(f"{tok.kind} applies to values only", tok.span) from None
        if tok.kind == "(":
            self.take()
            first = self.dist()
            if self.at(","):
                self.take()
                second = self.dist()
                self.expect(")", "')' after the pair")
                try:
                    return mk_pair(first, second)
                except ValueError:
                    raise ParseError("pair components must be values", tok.span) from None
            self.expect(")", "')'")
            return first
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise ParseError(f"expected a term, found {found}", tok.span)

    # -- types --------------------------------------------------------------

    def type_expr(self) -> Type:
        left = self.sum_type()
        if self.at("->"):
            self.take()
            return Arrow(left, self.type_expr())
        return left

    def sum_type(self) -> Type:
        parts = [self.prod_type()]
        while self.at("+"):
            self.take()
            parts.append(self.prod_type())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = Sum(p, out)
        return out

    def prod_type(self) -> Type:
        parts = [self.sharp_type()]
        while self.at("*"):
            self.take()
            parts.append(self.sharp_type())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = Prod(p, out)
        return out

    def sharp_type(self) -> Type:
        if self.at("#"):
            self.take()
            return Sharp(self.sharp_type())
        return self.atom_type()

    def atom_type(self) -> Type:
        tok = self.peek()
        if tok.kind == "(":
            self.take()
            t = self.type_expr()
            self.expect(")", "')'")
            return t
        if tok.kind == "ident":
            self.take()
            if tok.value == "U":
                return UNIT
            if tok.value == "B":
                return BOOL
            raise ParseError(f"unknown type name {tok.value!r}", tok.span)
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise ParseError(f"expected a type, found {found}", tok.span)


def parse_program(text: str) -> Distribution:
    p = _Parser(_lex(text))
    d = p.dist()
    p.expect("eof", "end of input")
    return d


def parse_type(text: str) -> Type:
    p = _Parser(_lex(text))
    t = p.type_expr()
    p.expect("eof", "end of input")
    return t


def pretty_print(d: Distribution) -> str:
    """Canonical concrete syntax: parsing the result gives back the canonical
    form of d, alpha-exactly."""
    return show_dist(canonicalize(d))
