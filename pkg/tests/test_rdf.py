import pytest

from ldpath.rdf import (
    EMPTY_MAPPING,
    IncompatibleMappingsError,
    SolutionMapping,
    Term,
    Triple,
    Variable,
    blank,
    compatible,
    iri,
    literal,
    merge,
)

a, b = iri("http://x/a"), iri("http://x/b")
X, Y = Variable("x"), Variable("y")


def test_term_kinds_and_n3():
    assert a.n3() == "<http://x/a>"
    assert blank("b1").n3() == "_:b1"
    assert literal("hi", language="en").n3() == '"hi"@en'
    assert literal("1", datatype="http://www.w3.org/2001/XMLSchema#integer").n3() == (
        '"1"^^<http://www.w3.org/2001/XMLSchema#integer>'
    )
    assert literal('say "x"\n').n3() == '"say \\"x\\"\\n"'


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="iri", lexical=""),
        dict(kind="literal", lexical=""),
        dict(kind="iri", lexical="http://x", language="en"),
        dict(kind="literal", lexical="x", datatype="http://d", language="en"),
        dict(kind="weird", lexical="x"),
    ],
)
def test_invalid_terms_rejected(kwargs):
    with pytest.raises(ValueError):
        Term(**kwargs)


def test_triple_positions():
    with pytest.raises(ValueError):
        Triple(literal("x"), a, b)
    with pytest.raises(ValueError):
        Triple(a, blank("p"), b)
    assert Triple(blank("s"), a, literal("o")).iris() == {a}


def test_mapping_equality_and_hash():
    m1 = SolutionMapping({X: a, Y: b})
    m2 = SolutionMapping([(Y, b), (X, a)])
    assert m1 == m2 and hash(m1) == hash(m2)
    assert m1.domain == {X, Y}
    assert m1.restrict([X]) == SolutionMapping({X: a})


def test_compatible_and_merge():
    m1 = SolutionMapping({X: a})
    assert compatible(m1, EMPTY_MAPPING)
    assert compatible(m1, SolutionMapping({Y: b}))
    assert not compatible(m1, SolutionMapping({X: b}))
    assert merge(m1, SolutionMapping({Y: b})) == SolutionMapping({X: a, Y: b})
    with pytest.raises(IncompatibleMappingsError):
        merge(m1, SolutionMapping({X: b}))
