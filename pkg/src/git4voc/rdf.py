"""RDF data model: terms, triples, prefix maps and graphs.

All values are immutable. Graph equality is triple-set equality; prefixes
and source line bookkeeping do not take part in it.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Optional, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

STANDARD_NAMESPACES = (RDF, RDFS, OWL, XSD)

RDF_TYPE = RDF + "type"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_BOOLEAN = XSD + "boolean"

_IRI_RE = re.compile(r'[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>"{}|^`\\]*\Z')
_BNODE_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_LANG_RE = re.compile(r"[A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*\Z")
PREFIX_LABEL_RE = re.compile(r"(?:[^\W\d_](?:[\w.\-]*[\w\-])?)?\Z")


def is_valid_iri(value: str) -> bool:
    return bool(value) and _IRI_RE.match(value) is not None


def is_valid_language(tag: str) -> bool:
    return _LANG_RE.match(tag) is not None


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not is_valid_iri(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")

    def sort_key(self) -> tuple:
        return (0, self.value, "", "")

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __post_init__(self) -> None:
        if not _BNODE_RE.match(self.label):
            raise ValueError(f"invalid blank node label: {self.label!r}")

    def sort_key(self) -> tuple:
        return (1, self.label, "", "")

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal with an optional language tag or datatype, never both.

    Language tags are stored lower-cased and an explicit ``xsd:string``
    datatype is dropped, so equal RDF literals compare equal here.
    """

    lexical: str
    language: Optional[str] = None
    datatype: Optional[str] = None

    def __post_init__(self) -> None:
        if self.language is not None and self.datatype is not None:
            raise ValueError("literal cannot carry both a language and a datatype")
        if self.language is not None:
            if not is_valid_language(self.language):
                raise ValueError(f"invalid language tag: {self.language!r}")
            object.__setattr__(self, "language", self.language.lower())
        if self.datatype is not None:
            if not is_valid_iri(self.datatype):
                raise ValueError(f"invalid datatype IRI: {self.datatype!r}")
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", None)

    @property
    def effective_datatype(self) -> str:
        if self.language is not None:
            return RDF + "langString"
        return self.datatype or XSD_STRING

    def sort_key(self) -> tuple:
        return (2, self.lexical, self.language or "", self.datatype or "")

    def __str__(self) -> str:
        escaped = self.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        if self.language:
            return f'"{escaped}"@{self.language}'
        if self.datatype:
            return f'"{escaped}"^^<{self.datatype}>'
        return f'"{escaped}"'


Term = Union[Iri, BlankNode, Literal]
Subject = Union[Iri, BlankNode]


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Subject
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TypeError("triple subject must be an IRI or blank node")
        if not isinstance(self.predicate, Iri):
            raise TypeError("triple predicate must be an IRI")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise TypeError("triple object must be an RDF term")

    def sort_key(self) -> tuple:
        return (self.subject.sort_key(), self.predicate.value, self.object.sort_key())

    def n_triples(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


class PrefixMap(Mapping[str, str]):
    """Insertion-ordered, read-only mapping of prefix label to namespace IRI."""

    __slots__ = ("_items",)

    def __init__(self, items: Iterable[tuple[str, str]] | Mapping[str, str] = ()) -> None:
        if isinstance(items, Mapping):
            items = items.items()
        data: dict[str, str] = {}
        for label, namespace in items:
            if label in data:
                raise ValueError(f"duplicate prefix label: {label!r}")
            if not PREFIX_LABEL_RE.match(label):
                raise ValueError(f"invalid prefix label: {label!r}")
            if not is_valid_iri(namespace):
                raise ValueError(f"invalid namespace IRI for {label!r}: {namespace!r}")
            data[label] = namespace
        self._items = MappingProxyType(data)

    def __getitem__(self, label: str) -> str:
        return self._items[label]

    def __iter__(self) -> Iterator[str]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __repr__(self) -> str:
        return f"PrefixMap({dict(self._items)!r})"

    def merged(self, other: Mapping[str, str]) -> PrefixMap:
        """Labels of ``self`` win; new labels from ``other`` are appended."""
        data = dict(self._items)
        for label, namespace in other.items():
            data.setdefault(label, namespace)
        return PrefixMap(data)

    def shorten(self, iri: str) -> Optional[str]:
        """Return ``label:local`` for the longest matching namespace, if any."""
        best: Optional[tuple[int, str, str]] = None
        for label, namespace in self._items.items():
            if iri.startswith(namespace):
                cand = (-len(namespace), label, iri[len(namespace):])
                if best is None or cand < best:
                    best = cand
        if best is None:
            return None
        return f"{best[1]}:{best[2]}"


@dataclass(frozen=True, eq=False)
class Graph:
    """A set of triples plus the prefixes declared for it.

    ``lines`` maps a triple to the source line it was read from; it is
    bookkeeping for diagnostics only.
    """

    triples: frozenset[Triple] = frozenset()
    prefixes: PrefixMap = field(default_factory=PrefixMap)
    origin: Optional[str] = None
    lines: Mapping[Triple, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.triples, frozenset):
            object.__setattr__(self, "triples", frozenset(self.triples))
        if not isinstance(self.prefixes, PrefixMap):
            object.__setattr__(self, "prefixes", PrefixMap(self.prefixes))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.triples == other.triples

    def __hash__(self) -> int:
        return hash(self.triples)

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self.triples

    def add(self, *triples: Triple) -> Graph:
        return Graph(self.triples.union(triples), self.prefixes, self.origin, self.lines)

    def with_triples(self, triples: Iterable[Triple]) -> Graph:
        return Graph(frozenset(triples), self.prefixes, self.origin, self.lines)

    def line_of(self, triple: Triple) -> Optional[int]:
        return self.lines.get(triple)

    def subjects(self) -> set[Subject]:
        return {t.subject for t in self.triples}


def local_name(iri: str, namespaces: Iterable[str] = ()) -> str:
    """Part of ``iri`` after its namespace (a known one, else after the last ``#`` or ``/``)."""
    for ns in sorted(namespaces, key=len, reverse=True):
        if iri.startswith(ns) and len(iri) > len(ns):
            return iri[len(ns):]
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut < 0:
        cut = iri.find(":")
    return iri[cut + 1:]


def namespace_of(iri: str) -> str:
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut < 0:
        cut = iri.find(":")
    return iri[: cut + 1]


def is_standard(iri: str) -> bool:
    return iri.startswith(STANDARD_NAMESPACES)
