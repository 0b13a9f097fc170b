import json
import threading

import pytest

from ldpath.rdf import RDFGraph, Triple, iri, literal
from ldpath.web import (
    NOT_RETRIEVABLE,
    RETRIEVED,
    Document,
    FixtureError,
    FixtureWeb,
    OmniscienceRequiredError,
    WoLD,
    load_fixture,
    require_wold,
)

from conftest import ex

KNOWS, NAME = ex("knows"), ex("name")


def test_desk_shape(desk):
    assert len(desk.documents) == 3
    assert len(desk.adoc) == 3
    assert len(desk.union_graph()) == 7


def test_lookup_and_ledger(desk_web, desk):
    assert desk_web.lookup(ex("Bob")) is desk.adoc[ex("Bob")]
    assert desk_web.lookup(ex("Nobody")) is None
    desk_web.lookup(ex("Bob"))
    ledger = desk_web.ledger
    assert ledger.distinct_count == 2
    assert len(ledger.attempts) == 3
    assert ledger.outcomes == {ex("Bob"): RETRIEVED, ex("Nobody"): NOT_RETRIEVABLE}
    assert ledger.summary() == "lookups: distinct=2 attempts=3 not_retrievable=1"
    with pytest.raises(TypeError):
        desk_web.lookup(literal("Bob"))
    with pytest.raises(TypeError):
        desk_web.lookup("http://example.org/Bob")


def test_concurrent_lookups_fetch_once(desk):
    calls = []

    class Counting(FixtureWeb):
        def _fetch(self, u):
            calls.append(u)
            return super()._fetch(u)

    web = Counting(desk)
    threads = [threading.Thread(target=web.lookup, args=(ex("Tim"),)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert calls == [ex("Tim")]
    assert web.ledger.distinct_count == 1 and len(web.ledger.attempts) == 8


def test_context(desk):
    assert desk.context(ex("Bob")) == {
        Triple(ex("Bob"), KNOWS, ex("Alice")),
        Triple(ex("Bob"), NAME, literal("Bob")),
    }
    assert desk.context(literal("Bob")) == set()
    assert desk.context(ex("Nobody")) == set()
    assert desk.context(ex("Carol")) == set()


def test_all_terms(desk):
    expected = {ex(n) for n in ("Bob", "Alice", "Tim", "Carol", "knows", "name")}
    expected |= {literal(n) for n in ("Bob", "Alice", "Tim")}
    assert desk.all_terms() == expected
    assert WoLD().all_terms() == set()
    a, p, b = iri("a"), iri("p"), iri("b")
    assert WoLD([Document("d", RDFGraph([Triple(a, p, b)]))]).all_terms() == {a, p, b}


def test_union_graph_deduplicates():
    t = Triple(iri("a"), iri("p"), iri("b"))
    w = WoLD([Document("d1", RDFGraph([t])), Document("d2", RDFGraph([t]))])
    assert w.union_graph() == {t}


def test_link_graph(desk):
    edges = desk.link_graph().edge_ids()
    assert edges == {
        ("bob.nt", "bob.nt"),
        ("bob.nt", "alice.nt"),
        ("bob.nt", "tim.nt"),
        ("alice.nt", "alice.nt"),
        ("alice.nt", "tim.nt"),
        ("tim.nt", "tim.nt"),
        ("tim.nt", "bob.nt"),
    }
    assert WoLD().link_graph().edges == frozenset()
    lonely = Document("d", RDFGraph([Triple(iri("x"), iri("p"), iri("y"))]))
    assert WoLD([lonely]).link_graph().edges == frozenset()


def test_contexts_within_union(desk):
    union = desk.union_graph()
    for u in desk.adoc:
        ctx = desk.context(u)
        assert ctx <= union
        assert all(t.subject == u for t in ctx)


def write_manifest(tmp_path, entries, files):
    for name, text in files.items():
        (tmp_path / name).write_text(text)
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"documents": entries}))
    return path


def test_blank_nodes_scoped_per_document(tmp_path):
    files = {"a.nt": "_:b <http://p> <http://a> .\n", "b.nt": "_:b <http://p> <http://b> .\n"}
    entries = [{"iri": "http://a", "file": "a.nt"}, {"iri": "http://b", "file": "b.nt"}]
    w = load_fixture(write_manifest(tmp_path, entries, files))
    labels = [{t.subject for t in d.triples} for d in w.documents]
    assert labels[0].isdisjoint(labels[1])


def test_shared_document(tmp_path):
    files = {"a.nt": "<http://a> <http://p> <http://b> .\n"}
    entries = [{"iri": "http://a", "file": "a.nt"}, {"iri": "http://b", "file": "a.nt"}]
    w = load_fixture(write_manifest(tmp_path, entries, files))
    assert len(w.documents) == 1
    assert w.adoc[iri("http://a")] is w.adoc[iri("http://b")]


def test_empty_manifest(tmp_path):
    w = load_fixture(write_manifest(tmp_path, [], {}))
    assert w.documents == () and w.adoc == {}


@pytest.mark.parametrize(
    "entries, files, message",
    [
        ([{"iri": "http://a", "file": "missing.nt"}], {}, "missing.nt"),
        ([{"iri": "http://a", "file": "a.nt"}, {"iri": "http://a", "file": "a.nt"}], {"a.nt": ""}, "duplicate"),
        ([{"iri": "http://a", "file": "a.nt"}], {"a.nt": "\n<http://a> <http://p> .\n"}, "a.nt:2:"),
    ],
)
def test_fixture_errors(tmp_path, entries, files, message):
    with pytest.raises(FixtureError) as info:
        load_fixture(write_manifest(tmp_path, entries, files))
    assert message in str(info.value)


def test_omniscience_split(desk):
    from ldpath.http import HttpWeb

    assert require_wold(FixtureWeb(desk)) is desk
    with pytest.raises(OmniscienceRequiredError):
        require_wold(HttpWeb())
