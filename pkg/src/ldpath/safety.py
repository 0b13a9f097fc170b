"""Static Web-safety analysis via conditionally Web-bounded variables.

``cbv(P, X)`` is the set of variables of ``P`` that an evaluation can bind
with finitely many lookups, given that the variables in ``X`` are already
bound. A pattern whose variables are all bounded under ``X = {}`` is
Web-safe. The check is sound, not complete.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import AbstractSet, Iterable, Optional

from .patterns import (
    Alternative,
    And,
    GraphPattern,
    Inverse,
    Link,
    NegatedSet,
    Opt,
    PPPattern,
    Sequence,
    Star,
    Union_,
    cb_vars,
    format_pattern,
    fresh_variable,
    vars_of,
)
from .rdf import Variable

TraceEntry = tuple[str, int, tuple[str, ...], tuple[str, ...]]


def cbv(p: GraphPattern, bound: Iterable[Variable] = ()) -> frozenset[Variable]:
    return _cbv_cached(p, frozenset(bound))


def is_bounded(p: GraphPattern, bound: Iterable[Variable] = ()) -> bool:
    """True iff every variable of ``p`` is conditionally Web-bounded w.r.t. ``bound``."""
    return cbv(p, bound) == vars_of(p)


@lru_cache(maxsize=65536)
def _cbv_cached(p: GraphPattern, x: frozenset[Variable]) -> frozenset[Variable]:
    return _Analysis(None).cbv(p, x)


class _Analysis:
    def __init__(self, trace: Optional[list[TraceEntry]]):
        self.trace = trace

    def rec(self, p: GraphPattern, x: frozenset[Variable]) -> frozenset[Variable]:
        if self.trace is None:
            return _cbv_cached(p, x)
        return self.cbv(p, x)

    def done(self, p: GraphPattern, rule: int, x: AbstractSet[Variable], result: frozenset[Variable]) -> frozenset[Variable]:
        if self.trace is not None:
            self.trace.append((format_pattern(p), rule, _names(x), _names(result)))
        return result

    def full(self, p: GraphPattern, x: frozenset[Variable]) -> bool:
        return self.rec(p, x) == vars_of(p)

    def cbv(self, p: GraphPattern, x: frozenset[Variable]) -> frozenset[Variable]:
        if isinstance(p, PPPattern):
            return self.pp(p, x)
        if isinstance(p, And):
            left_full = self.full(p.left, x)
            right_full = self.full(p.right, x)
            if left_full and right_full:
                return self.done(p, 10, x, vars_of(p))
            if left_full and self.full(p.right, x | cb_vars(p.left)):
                return self.done(p, 11, x, vars_of(p))
            if right_full and self.full(p.left, x | cb_vars(p.right)):
                return self.done(p, 12, x, vars_of(p))
            return self.done(p, 13, x, frozenset())
        if isinstance(p, Union_):
            return self.done(p, 14, x, self.rec(p.left, x) & self.rec(p.right, x))
        if isinstance(p, Opt):
            if self.full(p.left, x):
                if self.full(p.right, x):
                    return self.done(p, 15, x, vars_of(p))
                if self.full(p.right, x | cb_vars(p.left)):
                    return self.done(p, 16, x, vars_of(p))
            return self.done(p, 17, x, frozenset())
        raise TypeError(f"not a graph pattern: {p!r}")

    def pp(self, p: PPPattern, x: frozenset[Variable]) -> frozenset[Variable]:
        e, alpha, beta = p.expr, p.subject, p.object
        if isinstance(e, (Link, NegatedSet)):
            if not isinstance(alpha, Variable) or alpha in x:
                return self.done(p, 1, x, vars_of(p))
            return self.done(p, 2, x, frozenset())
        if isinstance(e, Star):
            if isinstance(alpha, Variable) and not isinstance(beta, Variable):
                return self.done(p, 3, x, self.rec(PPPattern(beta, Star(Inverse(e.expr)), alpha), x))
            # any two variables behave alike, so one canonical pair decides the side condition
            vx = fresh_variable(())
            vy = fresh_variable((vx,))
            if self.rec(PPPattern(vx, e.expr, vy), frozenset([vx])) == frozenset([vx, vy]):
                return self.done(p, 4, x, self.rec(PPPattern(alpha, e.expr, beta), x))
            return self.done(p, 5, x, frozenset())
        if isinstance(e, Inverse):
            return self.done(p, 6, x, self.rec(p.reversed(e.expr), x))
        if isinstance(e, Alternative):
            rewritten = Union_(PPPattern(alpha, e.left, beta), PPPattern(alpha, e.right, beta))
            return self.done(p, 7, x, self.rec(rewritten, x))
        if isinstance(e, Sequence):
            v = fresh_variable(x | vars_of(p))
            rewritten = And(PPPattern(alpha, e.first, v), PPPattern(v, e.second, beta))
            inner = self.rec(rewritten, x)
            if v in inner:
                return self.done(p, 8, x, inner - {v})
            return self.done(p, 9, x, frozenset())
        raise TypeError(f"not a PP expression: {e!r}")


def cbv_traced(p: GraphPattern, bound: Iterable[Variable] = ()) -> tuple[frozenset[Variable], list[TraceEntry]]:
    trace: list[TraceEntry] = []
    result = _Analysis(trace).cbv(p, frozenset(bound))
    return result, trace


def _names(vs: AbstractSet[Variable]) -> tuple[str, ...]:
    return tuple(sorted(str(v) for v in vs))


@dataclass(frozen=True)
class SafetyReport:
    web_safe: bool
    cbv_at_empty: frozenset[Variable]
    missing: frozenset[Variable]
    rule_trace: list[TraceEntry] = field(default_factory=list, compare=False)

    def to_dict(self) -> dict:
        return {
            "web_safe": self.web_safe,
            "vars_bounded": list(_names(self.cbv_at_empty)),
            "missing": list(_names(self.missing)),
            "rule_trace": [
                {"pattern": pat, "rule": rule, "bound": list(x), "result": list(res)}
                for pat, rule, x, res in self.rule_trace
            ],
        }


def is_web_safe(p: GraphPattern) -> SafetyReport:
    bounded, trace = cbv_traced(p)
    missing = vars_of(p) - bounded
    return SafetyReport(not missing, bounded, missing, trace)
