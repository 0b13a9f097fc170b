"""Context-based evaluation of property paths over a Web of Linked Data.

Two evaluators live here:

* :class:`ContextReference` computes the denotational result from a fully
  known :class:`~ldpath.web.WoLD`. It is the oracle.
* :class:`ContextEvaluator` is the lookup-driven recursive algorithm. It
  only touches the Web through ``web.lookup`` and computes the result
  restricted to an input mapping ``mu_in``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .multiset import EMPTY, UNIT, SolutionMultiset, ms_project, ms_union
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
    format_pattern,
    fresh_variable,
    vars_of,
)
from .rdf import EMPTY_MAPPING, RDFGraph, SolutionMapping, Term, Variable, compatible, merge
from .safety import cbv
from .standard import StandardEvaluator, _compose, bind_pair, closure, eval_standard, match_triples, predicate_test
from .web import Web, WoLD, _MemoWeb, require_wold


class NotWebBoundedError(RuntimeError):
    """The pattern cannot be evaluated completely with finitely many lookups."""

    def __init__(self, message: str, missing: frozenset[Variable] = frozenset()):
        super().__init__(message)
        self.missing = missing


class LookupBudgetExceeded(RuntimeError):
    def __init__(self, limit: int, iri: Term):
        super().__init__(f"lookup budget of {limit} distinct IRIs exceeded when dereferencing {iri}")
        self.limit = limit
        self.iri = iri


# -- reference semantics -----------------------------------------------------

class ContextReference(StandardEvaluator):
    """Denotational context-based semantics over a known WoLD.

    Only the base cases and the domain of variable-to-variable stars differ
    from the single-graph semantics; everything else is inherited.
    """

    def __init__(self, wold: WoLD):
        super().__init__(wold.union_graph())
        self.wold = wold
        self._context_union: Optional[RDFGraph] = None

    def evaluate(self, p: PPPattern) -> SolutionMultiset:
        if isinstance(p.expr, (Link, NegatedSet)):
            return match_triples(p, self._search_space(p.subject), predicate_test(p.expr))
        return super().evaluate(p)

    def _search_space(self, subject) -> RDFGraph:
        if isinstance(subject, Variable):
            if self._context_union is None:
                self._context_union = self.wold.context_union()
            return self._context_union
        # literal subjects have an empty context
        return self.wold.context(subject)


def eval_ctx_reference(p: GraphPattern, web: Union[WoLD, _MemoWeb]) -> SolutionMultiset:
    return _compose(p, ContextReference(require_wold(web)).evaluate)


def alpw1(gamma: Term, e: PPExpression, web: Union[WoLD, _MemoWeb]) -> set[Term]:
    return ContextReference(require_wold(web)).alp(gamma, e)


# -- lookup-driven algorithm -------------------------------------------------

@dataclass(frozen=True)
class EvalConfig:
    max_lookups: Optional[int] = None
    force_unsafe: bool = False
    trace: bool = False

    def __post_init__(self) -> None:
        if self.max_lookups is not None and self.max_lookups < 1:
            raise ValueError("max_lookups must be a positive integer")


class ContextEvaluator:
    """Recursive evaluation returning results restricted to ``mu_in``."""

    def __init__(self, web: Web, cfg: EvalConfig = EvalConfig()):
        self.web = web
        self.cfg = cfg
        self.trace_lines: list[str] = []
        self._steps: dict[tuple[PPExpression, Term], frozenset[Term]] = {}

    # entry points

    def evaluate(self, p: GraphPattern, mu_in: SolutionMapping = EMPTY_MAPPING) -> SolutionMultiset:
        if not self.cfg.force_unsafe:
            missing = vars_of(p) - cbv(p, mu_in.domain)
            if missing:
                names = ", ".join(sorted(map(str, missing)))
                raise NotWebBoundedError(f"pattern is not Web-bounded; unbounded variables: {names}", missing)
        return self._eval(p, mu_in, 0)

    def alp(self, gamma: Term, e: PPExpression, depth: int = 0) -> set[Term]:
        return closure(gamma, lambda g: self._step(g, e, depth + 1))

    # plumbing

    def _note(self, depth: int, case: str, fragment, iri: Optional[Term] = None) -> None:
        if self.cfg.trace:
            text = fragment if isinstance(fragment, str) else format_pattern(fragment)
            self.trace_lines.append(f"{depth}\t{case}\t{text}\t{iri.n3() if iri is not None else '-'}")

    def _lookup(self, u: Term, depth: int):
        limit = self.cfg.max_lookups
        if limit is not None and not self.web.has_looked_up(u) and self.web.ledger.distinct_count >= limit:
            raise LookupBudgetExceeded(limit, u)
        self._note(depth, "lookup", u.n3(), u)
        return self.web.lookup(u)

    def _step(self, gamma: Term, e: PPExpression, depth: int) -> frozenset[Term]:
        key = (e, gamma)
        found = self._steps.get(key)
        if found is None:
            x = fresh_variable(())
            y = fresh_variable((x,))
            result = self._eval(PPPattern(x, e, y), SolutionMapping({x: gamma}), depth)
            found = frozenset(mu[y] for mu in result)
            self._steps[key] = found
        return found

    # case dispatch

    def _eval(self, p: GraphPattern, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        if isinstance(p, PPPattern):
            return self._eval_pp(p, mu_in, depth)
        if isinstance(p, And):
            return self._eval_and(p, mu_in, depth)
        if isinstance(p, Union_):
            self._note(depth, "union", p)
            return ms_union(self._eval(p.left, mu_in, depth + 1), self._eval(p.right, mu_in, depth + 1))
        if isinstance(p, Opt):
            return self._eval_opt(p, mu_in, depth)
        raise TypeError(f"not a graph pattern: {p!r}")

    def _eval_pp(self, p: PPPattern, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        e, alpha, beta = p.expr, p.subject, p.object
        if isinstance(e, (Link, NegatedSet)):
            return self._eval_base(p, mu_in, depth)
        if isinstance(e, Inverse):
            self._note(depth, "inverse", p)
            return self._eval(p.reversed(e.expr), mu_in, depth + 1)
        if isinstance(e, Sequence):
            self._note(depth, "sequence", p)
            v = fresh_variable(mu_in.domain | vars_of(p))
            rewritten = And(PPPattern(alpha, e.first, v), PPPattern(v, e.second, beta))
            return ms_project(vars_of(p), self._eval(rewritten, mu_in, depth + 1))
        if isinstance(e, Alternative):
            self._note(depth, "alternative", p)
            rewritten = Union_(PPPattern(alpha, e.left, beta), PPPattern(alpha, e.right, beta))
            return self._eval(rewritten, mu_in, depth + 1)
        if isinstance(e, Star):
            return self._eval_star(p, e.expr, mu_in, depth)
        raise TypeError(f"not a PP expression: {e!r}")

    def _eval_base(self, p: PPPattern, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        alpha = p.subject
        if isinstance(alpha, Variable) and alpha in mu_in:
            alpha = mu_in[alpha]
        if isinstance(alpha, Variable):
            if self.cfg.force_unsafe:
                return self._eval_base_enumerated(p, mu_in, depth)
            # no IRI to look up; the precondition rules this out at the top level
            self._note(depth, "base-unbound", p)
            return EMPTY
        if not alpha.is_iri:
            self._note(depth, "base-nonIRI", p)
            return EMPTY
        self._note(depth, "base", p, alpha)
        return self._base_from(alpha, p, mu_in, depth + 1)

    def _base_from(self, u: Term, p: PPPattern, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        doc = self._lookup(u, depth)
        if doc is None:
            return EMPTY
        sub = RDFGraph(t for t in doc.triples if t.subject == u)
        return eval_standard(p, sub).restrict_compatible(mu_in)

    def _eval_base_enumerated(self, p: PPPattern, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        if not self.web.omniscient:
            raise NotWebBoundedError(
                f"cannot enumerate candidate subjects for {format_pattern(p)} on a non-enumerable Web",
                frozenset([p.subject]),
            )
        self._note(depth, "base-enumerate", p)
        result = EMPTY
        for u in sorted(self.web.wold().adoc):
            result = ms_union(result, self._base_from(u, p, mu_in, depth + 1))
        return result

    def _eval_star(self, p: PPPattern, e: PPExpression, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        alpha, beta = p.subject, p.object
        if isinstance(alpha, Term) and isinstance(beta, Variable):
            self._note(depth, "star-const-var", p)
            found = set()
            for x in self.alp(alpha, e, depth):
                if beta not in mu_in or mu_in[beta] == x:
                    found.add(SolutionMapping({beta: x}))
            return SolutionMultiset.of(found)
        if isinstance(alpha, Variable) and isinstance(beta, Variable):
            if alpha in mu_in:
                self._note(depth, "star-var-var", p)
                gamma = mu_in[alpha]
                found = set()
                for x in self.alp(gamma, e, depth):
                    mu = bind_pair(alpha, gamma, beta, x)
                    if mu is not None and compatible(mu, mu_in):
                        found.add(mu)
                return SolutionMultiset.of(found)
            if beta in mu_in:
                self._note(depth, "star-var-var-reverse", p)
                return self._eval(PPPattern(beta, Star(Inverse(e)), alpha), mu_in, depth + 1)
            return self._star_unbound(p, e, mu_in, depth)
        if isinstance(alpha, Variable):
            self._note(depth, "star-var-const", p)
            return self._eval(PPPattern(beta, Star(Inverse(e)), alpha), mu_in, depth + 1)
        self._note(depth, "star-const-const", p)
        return UNIT if beta in self.alp(alpha, e, depth) else EMPTY

    def _star_unbound(self, p: PPPattern, e: PPExpression, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        # Reversing here as well would loop forever; neither end can be reached by lookups.
        if not (self.cfg.force_unsafe and self.web.omniscient):
            raise NotWebBoundedError(
                f"neither end of {format_pattern(p)} is bound", frozenset([p.subject, p.object])
            )
        self._note(depth, "star-enumerate", p)
        alpha, beta = p.subject, p.object
        found = set()
        for gamma in sorted(self.web.wold().all_terms()):
            for x in self.alp(gamma, e, depth):
                mu = bind_pair(alpha, gamma, beta, x)
                if mu is not None:
                    found.add(mu)
        return SolutionMultiset.of(found)

    def _eval_and(self, p: And, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        self._note(depth, "and", p)
        first, second = p.left, p.right
        if cbv(first, mu_in.domain) != vars_of(first):
            first, second = second, first
        counts: dict[SolutionMapping, int] = {}
        outer = self._eval(first, mu_in, depth + 1)
        for mu, k in outer.sorted_items():
            inner = self._eval(second, merge(mu_in, mu), depth + 1)
            for mu2, k2 in inner.sorted_items():
                merged = merge(mu, mu2)
                counts[merged] = counts.get(merged, 0) + k * k2
        return SolutionMultiset(counts)

    def _eval_opt(self, p: Opt, mu_in: SolutionMapping, depth: int) -> SolutionMultiset:
        self._note(depth, "opt", p)
        counts: dict[SolutionMapping, int] = {}
        left = self._eval(p.left, mu_in, depth + 1)
        for mu, k in left.sorted_items():
            right = self._eval(p.right, mu, depth + 1)
            if not right:
                counts[mu] = counts.get(mu, 0) + k
                continue
            for mu2, k2 in right.sorted_items():
                if compatible(mu2, mu_in):
                    merged = merge(mu, mu2)
                    counts[merged] = counts.get(merged, 0) + k * k2
        return SolutionMultiset(counts)


def eval_ctx_based(
    p: GraphPattern, mu_in: SolutionMapping, web: Web, cfg: EvalConfig = EvalConfig()
) -> SolutionMultiset:
    return ContextEvaluator(web, cfg).evaluate(p, mu_in)


def exec_alpw1(gamma: Term, e: PPExpression, web: Web, cfg: EvalConfig = EvalConfig()) -> set[Term]:
    return ContextEvaluator(web, cfg).alp(gamma, e)
