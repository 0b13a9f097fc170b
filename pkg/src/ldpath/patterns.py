"""Property-path expressions, PP patterns and graph patterns.

All nodes are frozen dataclasses, so patterns can be hashed, compared and
used as cache keys.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Union

from .rdf import SolutionMapping, Term, TermOrVar, Variable

FRESH_PREFIX = "_fv"


# -- PP expressions ----------------------------------------------------------

@dataclass(frozen=True)
class Link:
    iri: Term

    def __post_init__(self) -> None:
        if not self.iri.is_iri:
            raise ValueError("a link step must be an IRI")


@dataclass(frozen=True)
class NegatedSet:
    iris: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.iris:
            raise ValueError("a negated property set needs at least one IRI")
        if not all(u.is_iri for u in self.iris):
            raise ValueError("negated property sets contain IRIs only")


@dataclass(frozen=True)
class Inverse:
    expr: "PPExpression"


@dataclass(frozen=True)
class Sequence:
    first: "PPExpression"
    second: "PPExpression"


@dataclass(frozen=True)
class Alternative:
    left: "PPExpression"
    right: "PPExpression"


@dataclass(frozen=True)
class Star:
    expr: "PPExpression"


PPExpression = Union[Link, NegatedSet, Inverse, Sequence, Alternative, Star]


# -- patterns ----------------------------------------------------------------

@dataclass(frozen=True)
class PPPattern:
    subject: TermOrVar
    expr: PPExpression
    object: TermOrVar

    def __post_init__(self) -> None:
        for node in (self.subject, self.object):
            if isinstance(node, Term) and node.is_blank:
                raise ValueError("blank nodes are not permitted in PP patterns")
            if not isinstance(node, (Term, Variable)):
                raise TypeError(f"pattern node must be a term or variable: {node!r}")

    def reversed(self, expr: PPExpression) -> "PPPattern":
        """The pattern with subject and object swapped and a new expression."""
        return PPPattern(self.object, expr, self.subject)


@dataclass(frozen=True)
class And:
    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True)
class Union_:
    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True)
class Opt:
    left: "GraphPattern"
    right: "GraphPattern"


GraphPattern = Union[PPPattern, And, Union_, Opt]


def leaf(subject: TermOrVar, expr: PPExpression, obj: TermOrVar) -> PPPattern:
    return PPPattern(subject, expr, obj)


# -- variable analyses -------------------------------------------------------

def vars_of(p: GraphPattern) -> frozenset[Variable]:
    """All variables in subject or object position anywhere in ``p``."""
    if isinstance(p, PPPattern):
        return frozenset(n for n in (p.subject, p.object) if isinstance(n, Variable))
    return vars_of(p.left) | vars_of(p.right)


def cb_vars(p: GraphPattern) -> frozenset[Variable]:
    """Strongly bound variables: those bound in every solution of ``p``."""
    if isinstance(p, PPPattern):
        return vars_of(p)
    if isinstance(p, And):
        return cb_vars(p.left) | cb_vars(p.right)
    if isinstance(p, Union_):
        return cb_vars(p.left) & cb_vars(p.right)
    if isinstance(p, Opt):
        return cb_vars(p.left)
    raise TypeError(f"not a graph pattern: {p!r}")


def iris_of(p: Union[GraphPattern, PPExpression]) -> frozenset[Term]:
    """IRIs mentioned anywhere in a pattern or expression."""
    if isinstance(p, Link):
        return frozenset([p.iri])
    if isinstance(p, NegatedSet):
        return frozenset(p.iris)
    if isinstance(p, (Inverse, Star)):
        return iris_of(p.expr)
    if isinstance(p, Sequence):
        return iris_of(p.first) | iris_of(p.second)
    if isinstance(p, PPPattern):
        nodes = {n for n in (p.subject, p.object) if isinstance(n, Term) and n.is_iri}
        return frozenset(nodes) | iris_of(p.expr)
    return iris_of(p.left) | iris_of(p.right)


def fresh_variable(avoid: Iterable[Variable]) -> Variable:
    """First of ``_fv0, _fv1, ...`` not in ``avoid``.

    The parser rejects user variables with this prefix, so the result is also
    fresh with respect to every user-written pattern.
    """
    taken = {v.name for v in avoid}
    for i in itertools.count():
        name = f"{FRESH_PREFIX}{i}"
        if name not in taken:
            return Variable(name)
    raise AssertionError("unreachable")


def substitute(mu: SolutionMapping, p: PPPattern) -> PPPattern:
    def sub(node: TermOrVar) -> TermOrVar:
        if isinstance(node, Variable) and node in mu:
            return mu[node]
        return node

    return PPPattern(sub(p.subject), p.expr, sub(p.object))


# -- pretty printing ---------------------------------------------------------

def format_node(node: TermOrVar) -> str:
    return str(node)


def format_expr(e: PPExpression) -> str:
    """Canonical, fully parenthesised text for an expression."""
    if isinstance(e, Link):
        return e.iri.n3()
    if isinstance(e, NegatedSet):
        return "!(" + "|".join(u.n3() for u in e.iris) + ")"
    if isinstance(e, Inverse):
        return "^" + format_expr(e.expr)
    if isinstance(e, Sequence):
        return f"({format_expr(e.first)}/{format_expr(e.second)})"
    if isinstance(e, Alternative):
        return f"({format_expr(e.left)}|{format_expr(e.right)})"
    if isinstance(e, Star):
        return f"({format_expr(e.expr)})*"
    raise TypeError(f"not a PP expression: {e!r}")


_KEYWORDS = {And: "AND", Union_: "UNION", Opt: "OPT"}


def format_pattern(p: GraphPattern) -> str:
    if isinstance(p, PPPattern):
        return f"{format_node(p.subject)} {format_expr(p.expr)} {format_node(p.object)}"
    return f"{{ {format_pattern(p.left)} {_KEYWORDS[type(p)]} {format_pattern(p.right)} }}"
