import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from ldpath.context import EvalConfig, eval_ctx_based
from ldpath.http import HttpWeb
from ldpath.parser import parse_query
from ldpath.rdf import EMPTY_MAPPING, Variable, iri, literal
from ldpath.web import ERROR, NOT_RETRIEVABLE, RETRIEVED


class Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_GET(self):
        base = f"http://127.0.0.1:{self.server.server_port}"
        routes = {
            "/bob": f"<{base}/bob> <http://p/knows> <{base}/alice> .\n<{base}/bob> <http://p/name> \"Bob\" .\n",
            "/alice": f"<{base}/alice> <http://p/knows> <{base}/tim> .\n",
            "/blank": f"_:x <http://p/q> <{base}/blank> .\n",
            "/bad": "this is not n-triples\n",
        }
        path = self.path.split("?")[0]
        if path == "/redirect":
            self.send_response(302)
            self.send_header("Location", "/bob")
            self.end_headers()
        elif path == "/loop":
            self.send_response(302)
            self.send_header("Location", "/loop")
            self.end_headers()
        elif path in routes:
            body = routes[path].encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/n-triples")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        else:
            self.send_response(404)
            self.end_headers()


@pytest.fixture(scope="module")
def server():
    srv = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{srv.server_port}"
    srv.shutdown()


def test_retrieval_outcomes(server):
    web = HttpWeb(timeout=5)
    doc = web.lookup(iri(server + "/bob"))
    assert doc is not None and len(doc.triples) == 2
    assert web.lookup(iri(server + "/redirect")) is not None
    assert web.lookup(iri(server + "/missing")) is None
    assert web.lookup(iri(server + "/bad")) is None
    assert web.lookup(iri(server + "/loop")) is None
    o = web.ledger.outcomes
    assert o[iri(server + "/bob")] == RETRIEVED
    assert o[iri(server + "/redirect")] == RETRIEVED
    assert o[iri(server + "/missing")] == NOT_RETRIEVABLE
    assert o[iri(server + "/bad")] == NOT_RETRIEVABLE
    assert o[iri(server + "/loop")] == NOT_RETRIEVABLE


def test_connection_failure_is_an_error():
    web = HttpWeb(timeout=2)
    assert web.lookup(iri("http://127.0.0.1:9/nothing")) is None
    assert web.ledger.outcomes[iri("http://127.0.0.1:9/nothing")] == ERROR


def test_blank_nodes_fresh_per_retrieval(server):
    web = HttpWeb(timeout=5)
    d1 = web.lookup(iri(server + "/blank"))
    d2 = web.lookup(iri(server + "/blank?again"))
    assert d1 is not None and d2 is not None
    assert not ({t.subject for t in d1.triples} & {t.subject for t in d2.triples})


def test_traversal_over_http(server):
    web = HttpWeb(timeout=5)
    p = parse_query(f"<{server}/bob> <http://p/knows>/<http://p/knows> ?x")
    result = eval_ctx_based(p, EMPTY_MAPPING, web, EvalConfig())
    assert set(result) == {next(iter(result))}
    assert next(iter(result))[Variable("x")] == iri(server + "/tim")
    assert web.ledger.distinct_count == 2


def test_force_refuses_enumeration_over_http():
    from ldpath.context import NotWebBoundedError

    web = HttpWeb(timeout=1)
    with pytest.raises(NotWebBoundedError):
        eval_ctx_based(parse_query("?v <http://p/knows> <http://x/Tim>"), EMPTY_MAPPING, web, EvalConfig(force_unsafe=True))
