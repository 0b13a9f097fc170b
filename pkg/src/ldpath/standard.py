"""W3C-standard property path semantics over a single RDF graph, and the
full-Web semantics that applies it to the union of all documents."""
from __future__ import annotations

from typing import Callable, Iterable, Union

from .multiset import EMPTY, UNIT, SolutionMultiset, ms_join, ms_minus, ms_project, ms_union
from .patterns import (
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
    fresh_variable,
    vars_of,
)
from .rdf import RDFGraph, SolutionMapping, Term, TermOrVar, Triple, Variable
from .web import WoLD, _MemoWeb, require_wold


def match_triples(p: PPPattern, triples: Iterable[Triple], predicate_ok: Callable[[Term], bool]) -> SolutionMultiset:
    """Solutions mu with dom(mu) = the pattern's variables and mu[p] matching a triple.

    Each distinct mapping counts once, whatever the number of matching triples.
    """
    found = set()
    for t in triples:
        if not predicate_ok(t.predicate):
            continue
        mu = bind_pair(p.subject, t.subject, p.object, t.object)
        if mu is not None:
            found.add(mu)
    return SolutionMultiset.of(found)


def bind_pair(a: TermOrVar, s: Term, b: TermOrVar, o: Term) -> SolutionMapping | None:
    bindings: dict[Variable, Term] = {}
    for node, term in ((a, s), (b, o)):
        if isinstance(node, Variable):
            prev = bindings.get(node)
            if prev is not None and prev != term:
                return None
            bindings[node] = term
        elif node != term:
            return None
    return SolutionMapping(bindings)


def predicate_test(e: Union[Link, NegatedSet]) -> Callable[[Term], bool]:
    if isinstance(e, Link):
        return lambda p: p == e.iri
    excluded = frozenset(e.iris)
    return lambda p: p not in excluded


def star_solutions(p: PPPattern, starts: Iterable[Term], reach: Callable[[Term], set[Term]]) -> SolutionMultiset:
    """Solutions of a star pattern whose subject is a variable ranging over ``starts``."""
    alpha, beta = p.subject, p.object
    found = set()
    for t in starts:
        for x in reach(t):
            mu = bind_pair(alpha, t, beta, x)
            if mu is not None:
                found.add(mu)
    return SolutionMultiset.of(found)


def closure(start: Term, successors: Callable[[Term], Iterable[Term]]) -> set[Term]:
    """Visited set of a depth-first walk from ``start``; the start is always included."""
    visited: set[Term] = set()
    stack = [start]
    while stack:
        gamma = stack.pop()
        if gamma in visited:
            continue
        visited.add(gamma)
        # reversed so the smallest successor is expanded first
        stack.extend(sorted(set(successors(gamma)) - visited, reverse=True))
    return visited


class StandardEvaluator:
    """Evaluates PP patterns over one graph, caching one-step relations per expression."""

    def __init__(self, graph: RDFGraph):
        self.graph = graph
        self._steps: dict[PPExpression, dict[Term, set[Term]]] = {}
        self._terms: set[Term] | None = None

    @property
    def terms(self) -> set[Term]:
        if self._terms is None:
            self._terms = self.graph.terms()
        return self._terms

    def evaluate(self, p: PPPattern) -> SolutionMultiset:
        e, alpha, beta = p.expr, p.subject, p.object
        if isinstance(e, (Link, NegatedSet)):
            return match_triples(p, self.graph, predicate_test(e))
        if isinstance(e, Inverse):
            return self.evaluate(p.reversed(e.expr))
        if isinstance(e, Sequence):
            v = fresh_variable(vars_of(p))
            joined = ms_join(
                self.evaluate(PPPattern(alpha, e.first, v)),
                self.evaluate(PPPattern(v, e.second, beta)),
            )
            return ms_project(vars_of(p), joined)
        if isinstance(e, Alternative):
            return ms_union(
                self.evaluate(PPPattern(alpha, e.left, beta)),
                self.evaluate(PPPattern(alpha, e.right, beta)),
            )
        if isinstance(e, Star):
            return self._star(p, e.expr)
        raise TypeError(f"not a PP expression: {e!r}")

    def _star(self, p: PPPattern, e: PPExpression) -> SolutionMultiset:
        alpha, beta = p.subject, p.object
        if isinstance(alpha, Term) and isinstance(beta, Variable):
            return SolutionMultiset.of(SolutionMapping({beta: x}) for x in self.alp(alpha, e))
        if isinstance(alpha, Variable) and isinstance(beta, Variable):
            return star_solutions(p, self.terms, lambda t: self.alp(t, e))
        if isinstance(alpha, Variable):
            return self.evaluate(PPPattern(beta, Star(Inverse(e)), alpha))
        return UNIT if beta in self.alp(alpha, e) else EMPTY

    def step_relation(self, e: PPExpression) -> dict[Term, set[Term]]:
        """mu(?x) -> {mu(?y)} over all solutions of <?x, e, ?y>."""
        rel = self._steps.get(e)
        if rel is None:
            x = fresh_variable(())
            y = fresh_variable((x,))
            rel = {}
            for mu in self.evaluate(PPPattern(x, e, y)):
                rel.setdefault(mu[x], set()).add(mu[y])
            self._steps[e] = rel
        return rel

    def alp(self, gamma: Term, e: PPExpression) -> set[Term]:
        rel = self.step_relation(e)
        return closure(gamma, lambda t: rel.get(t, ()))


def eval_standard(p: PPPattern, graph: RDFGraph) -> SolutionMultiset:
    return StandardEvaluator(graph).evaluate(p)


def alp1(gamma: Term, e: PPExpression, graph: RDFGraph) -> set[Term]:
    return StandardEvaluator(graph).alp(gamma, e)


def eval_graph_pattern_standard(p: GraphPattern, graph: RDFGraph) -> SolutionMultiset:
    return _compose(p, StandardEvaluator(graph).evaluate)


def _compose(p: GraphPattern, leaf: Callable[[PPPattern], SolutionMultiset]) -> SolutionMultiset:
    if isinstance(p, PPPattern):
        return leaf(p)
    m1 = _compose(p.left, leaf)
    m2 = _compose(p.right, leaf)
    if isinstance(p, And):
        return ms_join(m1, m2)
    if isinstance(p, Union_):
        return ms_union(m1, m2)
    if isinstance(p, Opt):
        return ms_union(ms_join(m1, m2), ms_minus(m1, m2))
    raise TypeError(f"not a graph pattern: {p!r}")


def eval_fullweb(p: GraphPattern, web: Union[WoLD, _MemoWeb]) -> SolutionMultiset:
    """Evaluate over the union of every document's triples (omniscient backends only)."""
    return eval_graph_pattern_standard(p, require_wold(web).union_graph())
