"""Recursive-descent parser for the query surface syntax.

Grammar (``*`` and prefix ``^`` bind tightest, then ``/``, then ``|``)::

    query    := group | triple
    group    := '{' unit (('AND' | 'UNION' | 'OPT') unit)* '}'
    unit     := group | triple
    triple   := node path node
    node     := IRI | LITERAL | VAR
    path     := seq ('|' seq)*
    seq      := unary ('/' unary)*
    unary    := '^' unary | primary '*'*
    primary  := IRI | '!' negset | '(' path ')'
    negset   := IRI | '(' IRI ('|' IRI)* ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ntriples import _unescape
from .patterns import (
    FRESH_PREFIX,
    Alternative,
    And,
    GraphPattern,
    Inverse,
    Link,
    NegatedSet,
    Opt,
    PPExpression,
    PPPattern,
    Sequence,
    Star,
    Union_,
)
from .rdf import Term, TermOrVar, Variable, iri, literal


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        detail = f"{message} at line {line}, column {column}"
        if expected:
            detail += " (expected " + ", ".join(sorted(expected)) + ")"
        super().__init__(detail)
        self.line = line
        self.column = column
        self.expected = expected


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<literal>"(?:[^"\\\n\r]|\\.)*"(?:\^\^<[^<>"{}|^`\\\s]*>|@[A-Za-z]+(?:-[A-Za-z0-9]+)*)?)
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<blank>_:[A-Za-z0-9_.\-]*)
  | (?P<keyword>AND\b|UNION\b|OPT\b)
  | (?P<punct>[(){}/|^*!+?])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            line, col = _position(text, pos)
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


_SUGAR = {"+": "one-or-more '+'", "?": "zero-or-one '?'", "{": "repetition '{n,m}'"}


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # -- helpers
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None, expected: set[str] = frozenset()) -> QuerySyntaxError:
        tok = tok or self.peek()
        line, col = _position(self.text, tok.offset)
        return QuerySyntaxError(message, line, col, frozenset(expected))

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind not in ("punct", "keyword"):
            raise self.error(f"unexpected {_describe(tok)}", tok, {repr(text)})
        return self.advance()

    # -- grammar
    def parse_query(self) -> GraphPattern:
        result = self.parse_unit()
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error(f"unexpected {_describe(tok)} after end of query", tok, {"end of input"})
        return result

    def parse_unit(self) -> GraphPattern:
        if self.peek().text == "{" and self.peek().kind == "punct":
            return self.parse_group()
        return self.parse_triple()

    def parse_group(self) -> GraphPattern:
        self.expect("{")
        left = self.parse_unit()
        while self.peek().kind == "keyword":
            op = self.advance().text
            right = self.parse_unit()
            left = {"AND": And, "UNION": Union_, "OPT": Opt}[op](left, right)
        tok = self.peek()
        if tok.text != "}":
            raise self.error(f"unexpected {_describe(tok)}", tok, {"'}'", "AND", "UNION", "OPT"})
        self.advance()
        return left

    def parse_triple(self) -> PPPattern:
        subject = self.parse_node()
        expr = self.parse_path()
        obj = self.parse_node()
        return PPPattern(subject, expr, obj)

    def parse_node(self) -> TermOrVar:
        tok = self.peek()
        if tok.kind == "iri":
            self.advance()
            return self._iri(tok)
        if tok.kind == "literal":
            self.advance()
            return self._literal_token(tok)
        if tok.kind == "var":
            self.advance()
            name = tok.text[1:]
            if name.startswith(FRESH_PREFIX):
                raise self.error(f"variable names starting with '{FRESH_PREFIX}' are reserved", tok)
            return Variable(name)
        if tok.kind == "blank":
            raise self.error("blank nodes are not permitted in PP patterns; use a variable", tok)
        raise self.error(f"unexpected {_describe(tok)}", tok, {"IRI", "literal", "variable"})

    def _literal_token(self, tok: Token) -> Term:
        m = re.fullmatch(r'"((?:[^"\\\n\r]|\\.)*)"(?:\^\^<([^>]*)>|@(.+))?', tok.text)
        lex, dt, lang = m.groups()
        line, _ = _position(self.text, tok.offset)
        value = _unescape(lex, line, None)
        if not value:
            raise self.error("empty literals are not supported", tok)
        return literal(value, datatype=dt, language=lang.lower() if lang else None)

    def parse_path(self) -> PPExpression:
        left = self.parse_seq()
        while self._at_punct("|"):
            self.advance()
            left = Alternative(left, self.parse_seq())
        return left

    def parse_seq(self) -> PPExpression:
        left = self.parse_unary()
        while self._at_punct("/"):
            self.advance()
            left = Sequence(left, self.parse_unary())
        return left

    def parse_unary(self) -> PPExpression:
        if self._at_punct("^"):
            self.advance()
            return Inverse(self.parse_unary())
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if self._at_punct("*"):
                self.advance()
                expr = Star(expr)
            elif tok.kind == "punct" and tok.text in _SUGAR:
                raise self.error(
                    f"path modifier {_SUGAR[tok.text]} is syntactic sugar and not supported; "
                    "rewrite it with '*', '/' and '|'",
                    tok,
                )
            else:
                return expr

    def parse_primary(self) -> PPExpression:
        tok = self.peek()
        if tok.kind == "iri":
            self.advance()
            return Link(self._iri(tok))
        if self._at_punct("!"):
            self.advance()
            return self.parse_negset()
        if self._at_punct("("):
            self.advance()
            expr = self.parse_path()
            tok = self.peek()
            if not self._at_punct(")"):
                raise self.error(f"unexpected {_describe(tok)}", tok, {"')'", "'/'", "'|'", "'*'"})
            self.advance()
            return expr
        raise self.error(f"unexpected {_describe(tok)}", tok, {"IRI", "'!'", "'('", "'^'"})

    def parse_negset(self) -> NegatedSet:
        tok = self.peek()
        if tok.kind == "iri":
            self.advance()
            return NegatedSet((self._iri(tok),))
        if not self._at_punct("("):
            raise self.error(f"unexpected {_describe(tok)}", tok, {"IRI", "'('"})
        self.advance()
        iris = []
        while True:
            tok = self.peek()
            if tok.kind != "iri":
                raise self.error(f"unexpected {_describe(tok)}", tok, {"IRI"})
            self.advance()
            iris.append(self._iri(tok))
            if self._at_punct("|"):
                self.advance()
                continue
            if self._at_punct(")"):
                self.advance()
                return NegatedSet(tuple(iris))
            raise self.error(f"unexpected {_describe(self.peek())}", None, {"'|'", "')'"})

    def _iri(self, tok: Token) -> Term:
        if len(tok.text) <= 2:
            raise self.error("empty IRI", tok)
        return iri(tok.text[1:-1])

    def _at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == text


def _describe(tok: Token) -> str:
    if tok.kind == "eof":
        return "end of input"
    return f"{tok.kind} {tok.text!r}"


def parse_query(text: str) -> GraphPattern:
    """Parse query text into a graph pattern (a bare PP pattern is a leaf)."""
    return Parser(text).parse_query()
