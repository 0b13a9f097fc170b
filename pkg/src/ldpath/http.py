"""Lookups over real HTTP(S), content-negotiating for N-Triples."""
from __future__ import annotations

import itertools
from typing import Optional

import requests

from .ntriples import NTriplesError, parse_ntriples
from .rdf import Term
from .web import ERROR, NOT_RETRIEVABLE, RETRIEVED, Document, _MemoWeb

ACCEPT = "application/n-triples, text/plain;q=0.5"


class HttpWeb(_MemoWeb):
    """Dereferences IRIs on the live Web.

    A non-2xx status, a timeout, too many redirects or an unparsable body
    all count as "not retrievable". Connection failures are recorded as
    errors but otherwise treated the same way. Blank-node labels get a
    per-retrieval prefix so two documents never share one.
    """

    def __init__(self, timeout: float = 10.0, max_redirects: int = 5, session: Optional[requests.Session] = None):
        super().__init__()
        self.timeout = timeout
        self.session = session or requests.Session()
        self.session.max_redirects = max_redirects
        self._counter = itertools.count()

    def _fetch(self, u: Term) -> tuple[Optional[Document], str]:
        try:
            resp = self.session.get(u.lexical, headers={"Accept": ACCEPT}, timeout=self.timeout)
        except (requests.Timeout, requests.TooManyRedirects):
            return None, NOT_RETRIEVABLE
        except requests.RequestException:
            return None, ERROR
        if not 200 <= resp.status_code < 300:
            return None, NOT_RETRIEVABLE
        prefix = f"h{next(self._counter)}_"
        try:
            graph = parse_ntriples(resp.text, source=u.lexical, blank_label=lambda label: prefix + label)
        except NTriplesError:
            return None, NOT_RETRIEVABLE
        return Document(resp.url or u.lexical, graph), RETRIEVED
