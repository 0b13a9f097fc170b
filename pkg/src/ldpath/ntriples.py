"""A small line-based N-Triples reader and writer."""
from __future__ import annotations

import re
from typing import Callable, Iterable, Optional

from .rdf import RDFGraph, Term, Triple, blank, iri, literal


class NTriplesError(ValueError):
    def __init__(self, message: str, line: int, source: Optional[str] = None):
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source = source


_IRI = r"<([^<>\"{}|^`\\\x00-\x20]*)>"
_BNODE = r"_:([A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)"
_LIT = r'"((?:[^"\\\n\r]|\\.)*)"(?:\^\^' + _IRI + r"|@([A-Za-z]+(?:-[A-Za-z0-9]+)*))?"
_WS = r"[ \t]*"

_LINE = re.compile(
    "^" + _WS
    + "(?:" + _IRI + "|" + _BNODE + ")" + _WS
    + _IRI + _WS
    + "(?:" + _IRI + "|" + _BNODE + "|" + _LIT + ")" + _WS
    + r"\." + _WS + r"(?:#.*)?$"
)

_UNESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")
_SIMPLE = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape(text: str, line: int, source: Optional[str]) -> str:
    def repl(m: re.Match) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE:
            raise NTriplesError(f"unknown escape sequence \\{ch}", line, source)
        return _SIMPLE[ch]

    return _UNESCAPE.sub(repl, text)


def parse_ntriples(
    text: str,
    *,
    source: Optional[str] = None,
    blank_label: Callable[[str], str] = lambda label: label,
) -> RDFGraph:
    """Parse N-Triples text into a graph.

    ``blank_label`` rewrites every blank-node label, which lets callers scope
    labels to one document.
    """
    triples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.match(raw)
        if m is None:
            raise NTriplesError(f"malformed triple: {stripped[:80]!r}", lineno, source)
        s_iri, s_bnode, p_iri, o_iri, o_bnode, o_lex, o_dt, o_lang = m.groups()
        if not p_iri or (s_iri is not None and not s_iri) or (o_iri is not None and not o_iri):
            raise NTriplesError("empty IRI", lineno, source)
        subject = iri(s_iri) if s_iri is not None else blank(blank_label(s_bnode))
        if o_iri is not None:
            obj = iri(o_iri)
        elif o_bnode is not None:
            obj = blank(blank_label(o_bnode))
        else:
            value = _unescape(o_lex, lineno, source)
            if not value:
                raise NTriplesError("empty literals are not supported", lineno, source)
            obj = literal(value, datatype=o_dt, language=o_lang.lower() if o_lang else None)
        triples.append(Triple(subject, iri(p_iri), obj))
    return RDFGraph(triples)


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    return "".join(t.n3() + "\n" for t in sorted(triples, key=Triple.sort_key))


def parse_term(text: str) -> Term:
    """Parse a single N-Triples term such as ``<http://x>`` or ``"a"@en``."""
    text = text.strip()
    m = re.fullmatch(_IRI, text)
    if m:
        return iri(m.group(1))
    m = re.fullmatch(_BNODE, text)
    if m:
        return blank(m.group(1))
    m = re.fullmatch(_LIT, text)
    if m:
        lex, dt, lang = m.groups()
        return literal(_unescape(lex, 1, None), datatype=dt, language=lang.lower() if lang else None)
    raise ValueError(f"not an N-Triples term: {text!r}")
