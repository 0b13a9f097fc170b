import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldpath.patterns import (
    And,
    Inverse,
    Link,
    Opt,
    PPPattern,
    Sequence,
    Star,
    Union_,
    fresh_variable,
    vars_of,
)
from ldpath.rdf import Variable, iri, literal
from ldpath import safety
from ldpath.safety import cbv, cbv_traced, is_web_safe

from conftest import ex
from gen import VARS, random_expr, random_pattern

KNOWS = ex("knows")
v, x, y, z = Variable("v"), Variable("x"), Variable("y"), Variable("z")
P_E2 = PPPattern(v, Link(KNOWS), ex("Tim"))
P_E3 = And(PPPattern(ex("Bob"), Link(KNOWS), v), P_E2)
FINAL = Union_(PPPattern(iri("u1"), Link(iri("p1")), x), PPPattern(iri("u2"), Link(iri("p2")), y))
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_worked_examples():
    assert cbv(P_E2, {v}) == {v}
    assert cbv(P_E2, set()) == set()
    assert cbv(P_E3, set()) == {v}
    assert cbv(FINAL, set()) == set()


def test_reports():
    assert is_web_safe(P_E3).web_safe
    bad = is_web_safe(P_E2)
    assert not bad.web_safe and bad.missing == {v}
    assert not is_web_safe(FINAL).web_safe
    d = bad.to_dict()
    assert d["missing"] == ["?v"] and d["rule_trace"][-1]["rule"] == 2


def rules(p, bound=()):
    return [entry[1] for entry in cbv_traced(p, bound)[1]]


def test_rule_selection():
    lit = literal("x")
    assert rules(PPPattern(lit, Link(KNOWS), x)) == [1]
    assert 3 in rules(PPPattern(x, Star(Link(KNOWS)), ex("Tim")))
    assert rules(PPPattern(ex("Tim"), Star(Link(KNOWS)), x))[-1] == 4
    assert rules(PPPattern(ex("Tim"), Star(Inverse(Link(KNOWS))), x))[-1] == 5
    assert rules(PPPattern(x, Inverse(Link(KNOWS)), ex("Tim")))[-1] == 6
    assert rules(PPPattern(ex("Tim"), Sequence(Link(KNOWS), Link(KNOWS)), x))[-1] == 8
    assert rules(PPPattern(ex("Tim"), Sequence(Inverse(Link(KNOWS)), Link(KNOWS)), x))[-1] == 9
    left = PPPattern(ex("Bob"), Link(KNOWS), x)
    right = PPPattern(x, Link(KNOWS), y)
    assert rules(And(left, right))[-1] == 11
    assert rules(And(right, left))[-1] == 12
    assert rules(And(right, PPPattern(y, Link(KNOWS), z)))[-1] == 13
    assert rules(Opt(left, PPPattern(ex("Tim"), Link(KNOWS), y)))[-1] == 15
    assert rules(Opt(left, right))[-1] == 16
    assert rules(Opt(right, left))[-1] == 17


def test_star_var_var_needs_a_bound_end():
    p = PPPattern(x, Star(Link(KNOWS)), y)
    assert cbv(p) == set()
    assert cbv(p, {x}) == {x, y}
    assert cbv(p, {y}) == set()


def test_deep_sequence_chain_is_fast():
    e = Link(KNOWS)
    for _ in range(60):
        e = Sequence(e, Link(KNOWS))
    assert cbv(PPPattern(ex("Tim"), e, x)) == {x}


@settings(max_examples=300)
@given(seeds)
def test_cbv_within_vars_and_monotone(seed):
    rng = random.Random(seed)
    p = random_pattern(rng)
    xs = {w for w in VARS if rng.random() < 0.5}
    extra = {w for w in VARS if rng.random() < 0.5}
    base = cbv(p, xs)
    assert base <= vars_of(p)
    assert base <= cbv(p, xs | extra)
    assert cbv(p, xs) == base


@settings(max_examples=300)
@given(seeds)
def test_bounded_var_var_pattern_has_a_bound_end(seed):
    rng = random.Random(seed)
    a, b = rng.sample(VARS, 2)
    p = PPPattern(a, random_expr(rng, 2), b)
    xs = {w for w in VARS if rng.random() < 0.5}
    if cbv(p, xs) == vars_of(p):
        assert a in xs or b in xs


@settings(max_examples=100)
@given(seeds)
def test_fresh_name_choice_does_not_matter(seed):
    rng = random.Random(seed)
    p = random_pattern(rng)
    xs = frozenset(w for w in VARS if rng.random() < 0.5)
    first = safety._Analysis([]).cbv(p, xs)

    def shifted(avoid):
        return fresh_variable(set(avoid) | {Variable(f"_fv{i}") for i in range(5)})

    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(safety, "fresh_variable", shifted)
        assert safety._Analysis([]).cbv(p, xs) == first
