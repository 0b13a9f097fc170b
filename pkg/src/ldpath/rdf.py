"""RDF terms, triples, graphs and solution mappings."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

IRI = "iri"
BLANK = "blank"
LITERAL = "literal"

_KIND_ORDER = {IRI: 0, BLANK: 1, LITERAL: 2}


@dataclass(frozen=True)
class Term:
    """An IRI, blank node or literal.

    ``lexical`` holds the IRI string, the blank-node label, or the literal's
    lexical form. Literals may carry a datatype IRI or a language tag, never both.
    """

    kind: str
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown term kind {self.kind!r}")
        if not self.lexical:
            raise ValueError(f"{self.kind} terms need a non-empty lexical form")
        if self.kind != LITERAL:
            if self.datatype is not None or self.language is not None:
                raise ValueError("only literals carry a datatype or language tag")
        elif self.datatype is not None and self.language is not None:
            raise ValueError("a literal has either a datatype or a language tag")

    @property
    def is_iri(self) -> bool:
        return self.kind == IRI

    @property
    def is_blank(self) -> bool:
        return self.kind == BLANK

    @property
    def is_literal(self) -> bool:
        return self.kind == LITERAL

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.lexical, self.datatype or "", self.language or "")

    def __lt__(self, other: "Term") -> bool:
        return self.sort_key() < other.sort_key()

    def n3(self) -> str:
        """N-Triples serialization of the term."""
        if self.kind == IRI:
            return f"<{self.lexical}>"
        if self.kind == BLANK:
            return f"_:{self.lexical}"
        text = '"' + escape_literal(self.lexical) + '"'
        if self.language:
            return f"{text}@{self.language}"
        if self.datatype:
            return f"{text}^^<{self.datatype}>"
        return text

    def __str__(self) -> str:
        return self.n3()


def iri(value: str) -> Term:
    return Term(IRI, value)


def blank(label: str) -> Term:
    return Term(BLANK, label)


def literal(value: str, datatype: Optional[str] = None, language: Optional[str] = None) -> Term:
    return Term(LITERAL, value, datatype, language)


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_literal(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


@dataclass(frozen=True, order=True)
class Variable:
    """A query variable; ``name`` excludes the leading ``?``."""

    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("variable names must be non-empty")

    def __str__(self) -> str:
        return "?" + self.name


TermOrVar = Union[Term, Variable]


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if self.subject.is_literal:
            raise ValueError("a triple subject cannot be a literal")
        if not self.predicate.is_iri:
            raise ValueError("a triple predicate must be an IRI")

    def terms(self) -> tuple[Term, Term, Term]:
        return (self.subject, self.predicate, self.object)

    def iris(self) -> set[Term]:
        return {t for t in self.terms() if t.is_iri}

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."

    def sort_key(self) -> tuple:
        return tuple(t.sort_key() for t in self.terms())


class RDFGraph(frozenset):
    """A finite set of triples."""

    def __new__(cls, triples: Iterable[Triple] = ()) -> "RDFGraph":
        return super().__new__(cls, triples)

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for t in self:
            out.update(t.terms())
        return out

    def sorted(self) -> list[Triple]:
        return sorted(self, key=Triple.sort_key)

    def __repr__(self) -> str:
        return f"RDFGraph({len(self)} triples)"


class SolutionMapping(Mapping[Variable, Term]):
    """A finite partial function from variables to terms; immutable and hashable."""

    __slots__ = ("_data", "_hash")

    def __init__(self, bindings: Union[Mapping[Variable, Term], Iterable[tuple[Variable, Term]], None] = None):
        data = dict(bindings or {})
        for var, term in data.items():
            if not isinstance(var, Variable) or not isinstance(term, Term):
                raise TypeError(f"bad binding {var!r} -> {term!r}")
        self._data = data
        self._hash = hash(frozenset(data.items()))

    def __getitem__(self, var: Variable) -> Term:
        return self._data[var]

    def __iter__(self) -> Iterator[Variable]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SolutionMapping):
            return self._hash == other._hash and self._data == other._data
        return NotImplemented

    @property
    def domain(self) -> frozenset[Variable]:
        return frozenset(self._data)

    def restrict(self, variables: Iterable[Variable]) -> "SolutionMapping":
        keep = set(variables)
        return SolutionMapping({v: t for v, t in self._data.items() if v in keep})

    def sort_key(self) -> tuple:
        return tuple((v.name, t.sort_key()) for v, t in sorted(self._data.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{v}->{t}" for v, t in sorted(self._data.items()))
        return "{" + inner + "}"


EMPTY_MAPPING = SolutionMapping()


def compatible(m1: Mapping[Variable, Term], m2: Mapping[Variable, Term]) -> bool:
    if len(m2) < len(m1):
        m1, m2 = m2, m1
    for var, term in m1.items():
        other = m2.get(var)
        if other is not None and other != term:
            return False
    return True


class IncompatibleMappingsError(ValueError):
    pass


def merge(m1: SolutionMapping, m2: SolutionMapping) -> SolutionMapping:
    if not compatible(m1, m2):
        raise IncompatibleMappingsError(f"cannot merge incompatible mappings {m1!r} and {m2!r}")
    if not m2:
        return m1
    if not m1:
        return m2
    data = dict(m1.items())
    data.update(m2.items())
    return SolutionMapping(data)
