"""The Web of Linked Data model and lookup backends.

A :class:`WoLD` is the omniscient view (all documents plus the IRI to
document mapping). Query execution never touches it directly; it goes
through a backend's :meth:`lookup`, which records every dereference in a
:class:`LookupLedger`.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Protocol, Union

from .ntriples import NTriplesError, parse_ntriples
from .rdf import RDFGraph, Term, Triple

RETRIEVED = "retrieved"
NOT_RETRIEVABLE = "not-retrievable"
ERROR = "error"

DESK_MANIFEST = Path(__file__).parent / "data" / "desk" / "manifest.json"


class OmniscienceRequiredError(RuntimeError):
    """Raised when an operation needs full knowledge of the Web."""


class FixtureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Document:
    id: str
    triples: RDFGraph

    def __repr__(self) -> str:
        return f"Document({self.id!r}, {len(self.triples)} triples)"


@dataclass(frozen=True)
class LinkGraph:
    nodes: frozenset[Document]
    edges: frozenset[tuple[Document, Document]]

    def edge_ids(self) -> set[tuple[str, str]]:
        return {(a.id, b.id) for a, b in self.edges}


class WoLD:
    """Documents, their data, and the partial IRI -> document mapping."""

    def __init__(self, documents: Iterable[Document] = (), adoc: Optional[Mapping[Term, Document]] = None):
        self.documents: tuple[Document, ...] = tuple(documents)
        self.adoc: dict[Term, Document] = dict(adoc or {})
        known = set(map(id, self.documents))
        for u, d in self.adoc.items():
            if not u.is_iri:
                raise ValueError(f"adoc keys must be IRIs, got {u}")
            if id(d) not in known:
                raise ValueError(f"adoc({u}) is not one of the WoLD's documents")
        self._union: Optional[RDFGraph] = None
        self._contexts: dict[Term, RDFGraph] = {}

    def data(self, d: Document) -> RDFGraph:
        return d.triples

    def context(self, gamma: object) -> RDFGraph:
        """Triples of ``adoc(gamma)`` whose subject is ``gamma``; empty otherwise."""
        if not isinstance(gamma, Term) or not gamma.is_iri or gamma not in self.adoc:
            return RDFGraph()
        cached = self._contexts.get(gamma)
        if cached is None:
            cached = RDFGraph(t for t in self.adoc[gamma].triples if t.subject == gamma)
            self._contexts[gamma] = cached
        return cached

    def union_graph(self) -> RDFGraph:
        if self._union is None:
            triples: set[Triple] = set()
            for d in self.documents:
                triples.update(d.triples)
            self._union = RDFGraph(triples)
        return self._union

    def all_terms(self) -> set[Term]:
        return self.union_graph().terms()

    def context_union(self) -> RDFGraph:
        """Union of the contexts of every retrievable IRI."""
        triples: set[Triple] = set()
        for u in self.adoc:
            triples.update(self.context(u))
        return RDFGraph(triples)

    def link_graph(self) -> LinkGraph:
        edges = set()
        for d in self.documents:
            for t in d.triples:
                for u in t.iris():
                    target = self.adoc.get(u)
                    if target is not None:
                        edges.add((d, target))
        return LinkGraph(frozenset(self.documents), frozenset(edges))


@dataclass
class LookupLedger:
    """Every attempted dereference, in order, plus per-IRI outcomes."""

    attempts: list[tuple[Term, str]] = field(default_factory=list)
    outcomes: dict[Term, str] = field(default_factory=dict)

    @property
    def distinct_count(self) -> int:
        return len(self.outcomes)

    @property
    def not_retrievable_count(self) -> int:
        return sum(1 for o in self.outcomes.values() if o != RETRIEVED)

    def summary(self) -> str:
        return (
            f"lookups: distinct={self.distinct_count} attempts={len(self.attempts)} "
            f"not_retrievable={self.not_retrievable_count}"
        )


class Web(Protocol):
    ledger: LookupLedger
    omniscient: bool

    def lookup(self, u: Term) -> Optional[Document]: ...

    def has_looked_up(self, u: Term) -> bool: ...


class _MemoWeb:
    """Shared memo/ledger plumbing; subclasses implement ``_fetch``."""

    omniscient = False

    def __init__(self) -> None:
        self.ledger = LookupLedger()
        self._memo: dict[Term, Optional[Document]] = {}
        self._lock = threading.RLock()
        self._inflight: dict[Term, threading.Event] = {}

    def has_looked_up(self, u: Term) -> bool:
        with self._lock:
            return u in self._memo or u in self._inflight

    def lookup(self, u: Term) -> Optional[Document]:
        if not isinstance(u, Term) or not u.is_iri:
            raise TypeError(f"only IRIs can be looked up, got {u!r}")
        while True:
            with self._lock:
                if u in self._memo:
                    doc = self._memo[u]
                    self.ledger.attempts.append((u, self.ledger.outcomes[u]))
                    return doc
                event = self._inflight.get(u)
                if event is None:
                    event = self._inflight[u] = threading.Event()
                    break
            event.wait()
        try:
            doc, outcome = self._fetch(u)
        except BaseException:
            doc, outcome = None, ERROR
            raise
        finally:
            with self._lock:
                self._memo[u] = doc
                self.ledger.outcomes[u] = outcome
                self.ledger.attempts.append((u, outcome))
                del self._inflight[u]
                event.set()
        return doc

    def _fetch(self, u: Term) -> tuple[Optional[Document], str]:
        raise NotImplementedError

    def wold(self) -> WoLD:
        raise OmniscienceRequiredError(f"{type(self).__name__} cannot enumerate the Web")


class FixtureWeb(_MemoWeb):
    """Lookups served from an in-memory WoLD; omniscient operations allowed."""

    omniscient = True

    def __init__(self, wold: WoLD):
        super().__init__()
        self._wold = wold

    def _fetch(self, u: Term) -> tuple[Optional[Document], str]:
        doc = self._wold.adoc.get(u)
        return doc, (RETRIEVED if doc is not None else NOT_RETRIEVABLE)

    def wold(self) -> WoLD:
        return self._wold


def require_wold(source: Union[WoLD, _MemoWeb]) -> WoLD:
    if isinstance(source, WoLD):
        return source
    return source.wold()


def load_fixture(manifest_path: Union[str, Path]) -> WoLD:
    """Load a WoLD from a JSON manifest of ``{"iri", "file"}`` entries.

    Several IRIs may name the same file; they then share one document.
    Blank-node labels are prefixed per document so no label is shared.
    """
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FixtureError(f"manifest not found: {manifest_path}") from None
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{manifest_path}: invalid JSON: {exc}") from None
    entries = manifest.get("documents")
    if not isinstance(entries, list):
        raise FixtureError(f"{manifest_path}: expected a 'documents' list")

    base = manifest_path.parent
    docs_by_file: dict[str, Document] = {}
    adoc: dict[Term, Document] = {}
    for entry in entries:
        try:
            u, file = entry["iri"], entry["file"]
        except (KeyError, TypeError):
            raise FixtureError(f"{manifest_path}: each entry needs 'iri' and 'file'") from None
        key = Term("iri", u)
        if key in adoc:
            raise FixtureError(f"{manifest_path}: duplicate IRI entry {u}")
        doc = docs_by_file.get(file)
        if doc is None:
            doc = _load_document(base / file, file, prefix=f"d{len(docs_by_file)}_")
            docs_by_file[file] = doc
        adoc[key] = doc
    return WoLD(docs_by_file.values(), adoc)


def _load_document(path: Path, doc_id: str, prefix: str) -> Document:
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FixtureError(f"document file not found: {path}") from None
    try:
        graph = parse_ntriples(text, source=str(path), blank_label=lambda label: prefix + label)
    except NTriplesError as exc:
        raise FixtureError(str(exc)) from None
    return Document(doc_id, graph)


def desk_fixture() -> WoLD:
    return load_fixture(DESK_MANIFEST)
