"""Multi-file vocabulary snapshots and the notion of a vocabulary element."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path, PurePosixPath
from types import MappingProxyType

from .rdf import Graph, Iri, PrefixMap, Triple, is_standard, namespace_of
from .turtle import ParseError, TurtleSyntaxError, parse

VOCABULARY_SUFFIXES = (".ttl", ".rdf", ".owl")


def _check_path(path: str) -> str:
    pure = PurePosixPath(path)
    if "\\" in path or pure.is_absolute() or ".." in pure.parts or not path or path != pure.as_posix():
        raise ValueError(f"snapshot paths must be relative '/'-separated paths: {path!r}")
    return path


@dataclass(frozen=True)
class VocabularySnapshot:
    """The vocabulary files of one version, keyed by relative path."""

    files: Mapping[str, Graph] = field(default_factory=dict)
    base_namespaces: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        files = {_check_path(p): g for p, g in sorted(self.files.items())}
        object.__setattr__(self, "files", MappingProxyType(files))
        object.__setattr__(self, "base_namespaces", frozenset(self.base_namespaces))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VocabularySnapshot):
            return NotImplemented
        return dict(self.files) == dict(other.files)

    __hash__ = None  # type: ignore[assignment]

    def paths(self) -> list[str]:
        return list(self.files)

    def items(self) -> Iterator[tuple[str, Triple]]:
        for path, graph in self.files.items():
            for triple in graph.triples:
                yield path, triple

    def triple_count(self) -> int:
        return sum(len(g) for g in self.files.values())

    def prefixes(self) -> PrefixMap:
        merged = PrefixMap()
        for graph in self.files.values():
            merged = merged.merged(graph.prefixes)
        return merged

    def with_namespaces(self, namespaces: Iterable[str]) -> VocabularySnapshot:
        return VocabularySnapshot(self.files, frozenset(namespaces))

    def is_local(self, iri: str) -> bool:
        return any(iri.startswith(ns) for ns in self.base_namespaces)

    def elements(self) -> set[str]:
        """IRIs in a base namespace that appear in subject position.

        Without configured base namespaces every non-RDF/RDFS/OWL/XSD IRI
        subject counts as an element.
        """
        found: set[str] = set()
        for graph in self.files.values():
            for triple in graph.triples:
                s = triple.subject
                if isinstance(s, Iri):
                    found.add(s.value)
        if self.base_namespaces:
            return {e for e in found if self.is_local(e)}
        return {e for e in found if not is_standard(e)}


def infer_base_namespaces(*snapshots: VocabularySnapshot) -> frozenset[str]:
    """Namespaces of the non-standard IRI subjects across ``snapshots``."""
    namespaces: set[str] = set()
    for snap in snapshots:
        for _, triple in snap.items():
            if isinstance(triple.subject, Iri) and not is_standard(triple.subject.value):
                namespaces.add(namespace_of(triple.subject.value))
    return frozenset(ns for ns in namespaces if ns)


def parse_files(
    sources: Mapping[str, str], base_namespaces: Iterable[str] = ()
) -> tuple[VocabularySnapshot, list[ParseError]]:
    """Parse ``{path: text}``; unparseable files are left out and their errors returned."""
    files: dict[str, Graph] = {}
    errors: list[ParseError] = []
    for path in sorted(sources):
        text = sources[path].replace("\r\n", "\n")
        try:
            files[path] = parse(text, path)
        except TurtleSyntaxError as exc:
            errors.extend(exc.errors)
    return VocabularySnapshot(files, frozenset(base_namespaces)), errors


def collect_paths(args: Iterable[str | Path], suffixes: tuple[str, ...] = VOCABULARY_SUFFIXES) -> list[Path]:
    """Expand directories into the vocabulary files below them."""
    out: list[Path] = []
    for arg in args:
        p = Path(arg)
        if p.is_dir():
            out.extend(sorted(q for q in p.rglob("*") if q.is_file() and q.suffix in suffixes
                              and ".git" not in q.parts))
        else:
            out.append(p)
    seen: set[Path] = set()
    unique = []
    for p in out:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return unique


def display_path(path: Path) -> str:
    try:
        rel = path.resolve().relative_to(Path.cwd().resolve())
    except ValueError:
        rel = path
    text = rel.as_posix()
    return text[2:] if text.startswith("./") else text
