"""Semantic deltas between vocabulary versions and their activity classification.

A delta is the per-file set difference of triples. :func:`classify` assigns
every added/removed triple to exactly one activity (ACT1-ACT11), grouped
into the Basic, Semantic and Structural categories that drive version bumps.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from .rdf import (
    OWL,
    RDFS,
    BlankNode,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Term,
    Triple,
    is_standard,
)
from .snapshot import VocabularySnapshot
from .version import VersionLabel

ADDED = "added"
REMOVED = "removed"


class Category(str, enum.Enum):
    BASIC = "Basic"
    SEMANTIC = "Semantic"
    STRUCTURAL = "Structural"


class ActivityKind(enum.Enum):
    ACT1 = (1, "Simple Addition/Deletion", Category.BASIC)
    ACT2 = (2, "Complex Addition/Deletion", Category.SEMANTIC)
    ACT3 = (3, "Modification", Category.SEMANTIC)
    ACT4 = (4, "Reusing", Category.SEMANTIC)
    ACT5 = (5, "Alignment", Category.SEMANTIC)
    ACT6 = (6, "Refactoring", Category.SEMANTIC)
    ACT7 = (7, "Common Metadata", Category.BASIC)
    ACT8 = (8, "External Metadata", Category.SEMANTIC)
    ACT9 = (9, "Translating", Category.BASIC)
    ACT10 = (10, "Modularization", Category.STRUCTURAL)
    ACT11 = (11, "Partitioning", Category.STRUCTURAL)

    @property
    def number(self) -> int:
        return self.value[0]

    @property
    def display_name(self) -> str:
        return self.value[1]

    @property
    def category(self) -> Category:
        return self.value[2]


class Evidence(NamedTuple):
    path: str
    triple: Triple
    change: str  # ADDED or REMOVED

    def sort_key(self) -> tuple:
        return (self.path, self.triple.sort_key(), self.change)


@dataclass(frozen=True)
class ActivityRecord:
    kind: ActivityKind
    category: Category
    subject_iris: frozenset[str]
    evidence: tuple[Evidence, ...]

    def __post_init__(self) -> None:
        if self.category is not self.kind.category:
            raise ValueError(f"{self.kind.name} belongs to {self.kind.category.value}")
        if not self.evidence:
            raise ValueError("an activity record needs evidence")

    @property
    def added(self) -> int:
        return sum(1 for e in self.evidence if e.change == ADDED)

    @property
    def removed(self) -> int:
        return sum(1 for e in self.evidence if e.change == REMOVED)

    @property
    def paths(self) -> list[str]:
        return sorted({e.path for e in self.evidence})


@dataclass(frozen=True)
class TripleDelta:
    added: frozenset[tuple[str, Triple]] = frozenset()
    removed: frozenset[tuple[str, Triple]] = frozenset()
    files_added: frozenset[str] = frozenset()
    files_removed: frozenset[str] = frozenset()

    def __bool__(self) -> bool:
        return bool(self.added or self.removed or self.files_added or self.files_removed)

    def evidence(self) -> list[Evidence]:
        items = [Evidence(p, t, ADDED) for p, t in self.added]
        items += [Evidence(p, t, REMOVED) for p, t in self.removed]
        items.sort(key=Evidence.sort_key)
        return items


class MissingRemoval(ValueError):
    """A delta removes a triple or file the snapshot does not have."""


def compute_delta(old: VocabularySnapshot, new: VocabularySnapshot) -> TripleDelta:
    added: set[tuple[str, Triple]] = set()
    removed: set[tuple[str, Triple]] = set()
    empty: frozenset[Triple] = frozenset()
    for path in set(old.files) | set(new.files):
        before = old.files[path].triples if path in old.files else empty
        after = new.files[path].triples if path in new.files else empty
        added.update((path, t) for t in after - before)
        removed.update((path, t) for t in before - after)
    return TripleDelta(
        frozenset(added),
        frozenset(removed),
        frozenset(set(new.files) - set(old.files)),
        frozenset(set(old.files) - set(new.files)),
    )


def apply_delta(old: VocabularySnapshot, delta: TripleDelta) -> VocabularySnapshot:
    """Patch ``old`` with ``delta``.

    Raises:
        MissingRemoval: if the delta removes something ``old`` lacks.
    """
    missing_files = delta.files_removed - set(old.files)
    if missing_files:
        raise MissingRemoval(f"cannot remove absent file(s): {', '.join(sorted(missing_files))}")
    triples: dict[str, set[Triple]] = {p: set(g.triples) for p, g in old.files.items()}
    for path, triple in sorted(delta.removed, key=lambda pt: (pt[0], pt[1].sort_key())):
        if triple not in triples.get(path, ()):
            raise MissingRemoval(f"{path}: cannot remove absent triple {triple.n_triples()}")
        triples[path].discard(triple)
    for path in delta.files_removed:
        del triples[path]
    for path in delta.files_added:
        triples.setdefault(path, set())
    for path, triple in delta.added:
        triples.setdefault(path, set()).add(triple)
    files = {}
    for path, ts in triples.items():
        base = old.files.get(path)
        files[path] = Graph(frozenset(ts), base.prefixes if base else PrefixMap(), path)
    return VocabularySnapshot(files, old.base_namespaces)


# ---------------------------------------------------------------------------
# Classification

ALIGNMENT_PREDICATES = frozenset(
    {OWL + "equivalentClass", OWL + "equivalentProperty", OWL + "sameAs"}
)
STRUCTURAL_PREDICATES = frozenset(
    {RDFS + "subClassOf", RDFS + "subPropertyOf", RDFS + "domain", RDFS + "range"}
)
COMMON_METADATA_PREDICATES = frozenset(
    {RDFS + "label", RDFS + "comment", RDFS + "isDefinedBy", RDFS + "seeAlso"}
)
TEXT_PREDICATES = frozenset({RDFS + "label", RDFS + "comment"})
_CORE_NAMESPACES = ("http://www.w3.org/1999/02/22-rdf-syntax-ns#", RDFS, OWL)
_PLACEHOLDER = Iri("urn:x-git4voc:renamed-element")

Key = Union[str, tuple]


def _iris(triple: Triple) -> Iterable[str]:
    yield triple.subject.value if isinstance(triple.subject, Iri) else ""
    yield triple.predicate.value
    if isinstance(triple.object, Iri):
        yield triple.object.value


def _substitute(triple: Triple, old: str, new: Iri) -> Triple:
    def sub(term: Term) -> Term:
        return new if isinstance(term, Iri) and term.value == old else term

    return Triple(sub(triple.subject), sub(triple.predicate), sub(triple.object))  # type: ignore[arg-type]


class _Side:
    """Facts about one snapshot that the rules consult."""

    def __init__(self, snap: VocabularySnapshot, local) -> None:
        self.subjects: set[Union[Iri, BlankNode]] = set()
        self.mentioned: set[str] = set()
        self.languages: dict[object, set[str]] = defaultdict(set)
        self.bnode_parent: dict[BlankNode, Union[Iri, BlankNode]] = {}
        for _, t in sorted(snap.items(), key=lambda pt: (pt[0], pt[1].sort_key())):
            self.subjects.add(t.subject)
            self.mentioned.update(_iris(t))
            if t.predicate.value in TEXT_PREDICATES and isinstance(t.object, Literal) \
                    and t.object.language:
                self.languages[t.subject].add(t.object.language)
            if isinstance(t.object, BlankNode):
                self.bnode_parent.setdefault(t.object, t.subject)
        self.elements = {s.value for s in self.subjects if isinstance(s, Iri) and local(s.value)}

    def owner(self, term: Union[Iri, BlankNode]) -> Union[Iri, BlankNode]:
        """The IRI a blank node hangs off, following nested blank nodes."""
        seen = set()
        while isinstance(term, BlankNode) and term in self.bnode_parent and term not in seen:
            seen.add(term)
            term = self.bnode_parent[term]
        return term


class _Classifier:
    def __init__(self, delta: TripleDelta, old: VocabularySnapshot, new: VocabularySnapshot):
        namespaces = tuple(sorted(old.base_namespaces | new.base_namespaces))
        if not namespaces:
            raise ValueError("classification needs at least one base namespace")
        self.namespaces = namespaces
        self.delta = delta
        self.new_snap = new
        self.old = _Side(old, self.is_local)
        self.new = _Side(new, self.is_local)
        self.existing = self.old.elements & self.new.elements
        self.created = sorted(self.new.elements - self.old.elements)
        self.deleted = sorted(self.old.elements - self.new.elements)
        self.common_subjects = self.old.subjects & self.new.subjects
        self.pending: dict[Evidence, None] = dict.fromkeys(delta.evidence())
        self.owners: dict[Evidence, Optional[str]] = {}
        self.by_owner: dict[tuple[Optional[str], str], list[Evidence]] = defaultdict(list)
        self.by_mention: dict[str, list[Evidence]] = defaultdict(list)
        for e in self.pending:
            owner = self.side(e).owner(e.triple.subject)
            self.owners[e] = owner.value if isinstance(owner, Iri) else None
            self.by_owner[(self.owners[e], e.change)].append(e)
            for iri in set(_iris(e.triple)):
                self.by_mention[iri].append(e)
        self.groups: dict[tuple[ActivityKind, Key], list[Evidence]] = {}
        self.subjects: dict[tuple[ActivityKind, Key], set[str]] = {}

    def is_local(self, iri: str) -> bool:
        return iri.startswith(self.namespaces)

    def side(self, e: Evidence) -> _Side:
        return self.new if e.change == ADDED else self.old

    def owner_iri(self, e: Evidence) -> Optional[str]:
        return self.owners[e]

    def claim(self, kind: ActivityKind, key: Key, items: Iterable[Evidence],
              subjects: Iterable[str] = ()) -> None:
        items = [e for e in items if e in self.pending]
        if not items:
            return
        for e in items:
            del self.pending[e]
        self.groups.setdefault((kind, key), []).extend(items)
        self.subjects.setdefault((kind, key), set()).update(subjects)

    def claim_by_subject(self, kind: ActivityKind, items: Iterable[Evidence]) -> None:
        for e in list(items):
            owner = self.owner_iri(e)
            key = owner or str(self.side(e).owner(e.triple.subject))
            self.claim(kind, key, [e], [owner] if owner else [])

    def element_items(self, element: str, change: str) -> list[Evidence]:
        return [e for e in self.by_owner.get((element, change), ()) if e in self.pending]

    # rules, highest priority first ------------------------------------------

    def modularization(self) -> None:
        for path in sorted(self.delta.files_added):
            graph = self.new_snap.files[path]
            file_elements = {t.subject.value for t in graph.triples
                             if isinstance(t.subject, Iri) and self.is_local(t.subject.value)}
            if file_elements and not file_elements & self.old.elements:
                items = [e for e in self.pending if e.path == path and e.change == ADDED]
                self.claim(ActivityKind.ACT10, path, items, file_elements)

    def partitioning(self) -> None:
        moves: dict[Triple, tuple[list[Evidence], list[Evidence]]] = defaultdict(lambda: ([], []))
        for e in self.pending:
            moves[e.triple][0 if e.change == REMOVED else 1].append(e)
        for triple, (removed, added) in moves.items():
            if removed and added:
                key = (tuple(sorted(e.path for e in removed)), tuple(sorted(e.path for e in added)))
                subjects = [triple.subject.value] if isinstance(triple.subject, Iri) \
                    and self.is_local(triple.subject.value) else []
                self.claim(ActivityKind.ACT11, key, removed + added, subjects)

    def refactoring(self) -> None:
        def signature(element: str, change: str) -> frozenset:
            items = [e for e in self.by_mention.get(element, ())
                     if e.change == change and e in self.pending]
            return frozenset((e.path, _substitute(e.triple, element, _PLACEHOLDER)) for e in items)

        candidates: dict[frozenset, list[str]] = defaultdict(list)
        for element in self.created:
            if element in self.old.mentioned:
                continue
            sig = signature(element, ADDED)
            if sig:
                candidates[sig].append(element)
        for element in self.deleted:
            if element in self.new.mentioned:
                continue
            sig = signature(element, REMOVED)
            if sig and candidates.get(sig):
                renamed = candidates[sig].pop(0)
                items = [e for e in self.by_mention[element] if e.change == REMOVED]
                items += [e for e in self.by_mention[renamed] if e.change == ADDED]
                self.claim(ActivityKind.ACT6, (element, renamed), items, [element, renamed])

    def alignment(self) -> None:
        self.claim_by_subject(
            ActivityKind.ACT5,
            [e for e in self.pending if e.triple.predicate.value in ALIGNMENT_PREDICATES],
        )

    def reuses_external(self, e: Evidence) -> bool:
        t = e.triple
        if e.change != ADDED or t.predicate.value in COMMON_METADATA_PREDICATES:
            return False
        owner = self.owner_iri(e)
        if owner is None or not self.is_local(owner):
            return False
        obj = t.object
        if isinstance(obj, Iri) and not self.is_local(obj.value) and not is_standard(obj.value):
            return True
        pred = t.predicate.value
        return not isinstance(obj, Literal) and not self.is_local(pred) and not is_standard(pred)

    def reusing(self) -> None:
        for element in self.created:
            items = self.element_items(element, ADDED)
            if any(self.reuses_external(e) for e in items):
                self.claim(ActivityKind.ACT4, element, items, [element])
        self.claim_by_subject(ActivityKind.ACT4, [e for e in self.pending if self.reuses_external(e)])

    def complex_change(self) -> None:
        for elements, change in ((self.created, ADDED), (self.deleted, REMOVED)):
            for element in elements:
                links = [e for e in self.by_mention.get(element, ())
                         if e in self.pending and e.change == change
                         and isinstance(e.triple.object, Iri) and e.triple.object.value == element
                         and self.owner_iri(e) in self.existing]
                if links:
                    self.claim(ActivityKind.ACT2, element,
                               links + self.element_items(element, change), [element])

    def modification(self) -> None:
        slots: dict[tuple[str, str], list[Evidence]] = defaultdict(list)
        for e in self.pending:
            owner = self.owner_iri(e)
            if e.triple.predicate.value in STRUCTURAL_PREDICATES and owner in self.existing:
                slots[(owner, e.triple.predicate.value)].append(e)
        for (owner, _), items in sorted(slots.items()):
            if {e.change for e in items} == {ADDED, REMOVED}:
                self.claim(ActivityKind.ACT3, owner, items, [owner])

    def translating(self) -> None:
        items = []
        for e in self.pending:
            t = e.triple
            if t.predicate.value not in TEXT_PREDICATES or t.subject not in self.common_subjects:
                continue
            if not isinstance(t.object, Literal) or not t.object.language:
                continue
            other = self.old if e.change == ADDED else self.new
            if t.object.language not in other.languages.get(t.subject, ()):
                items.append(e)
        self.claim_by_subject(ActivityKind.ACT9, items)

    def common_metadata(self) -> None:
        self.claim_by_subject(ActivityKind.ACT7, [
            e for e in self.pending
            if e.triple.predicate.value in COMMON_METADATA_PREDICATES
            and e.triple.subject in self.common_subjects
        ])

    def external_metadata(self) -> None:
        self.claim_by_subject(ActivityKind.ACT8, [
            e for e in self.pending
            if not e.triple.predicate.value.startswith(_CORE_NAMESPACES)
            and not self.is_local(e.triple.predicate.value)
            and e.triple.subject in self.common_subjects
        ])

    def simple_change(self) -> None:
        for elements, change in ((self.created, ADDED), (self.deleted, REMOVED)):
            for element in elements:
                self.claim(ActivityKind.ACT1, element, self.element_items(element, change), [element])

    def leftovers(self) -> None:
        for e in list(self.pending):
            touched = {self.owner_iri(e)}
            if isinstance(e.triple.object, Iri):
                touched.add(e.triple.object.value)
            kind = ActivityKind.ACT3 if touched & self.existing else ActivityKind.ACT1
            self.claim_by_subject(kind, [e])

    def run(self) -> list[ActivityRecord]:
        for rule in (self.modularization, self.partitioning, self.refactoring, self.alignment,
                     self.reusing, self.complex_change, self.modification, self.translating,
                     self.common_metadata, self.external_metadata, self.simple_change,
                     self.leftovers):
            if not self.pending:
                break
            rule()
        records = [
            ActivityRecord(kind, kind.category, frozenset(self.subjects[(kind, key)]),
                           tuple(sorted(items, key=Evidence.sort_key)))
            for (kind, key), items in self.groups.items()
        ]
        records.sort(key=_record_key)
        return records


def _record_key(record: ActivityRecord) -> tuple:
    return (record.kind.number, sorted(record.subject_iris), record.paths,
            [e.sort_key() for e in record.evidence])


def classify(delta: TripleDelta, old: VocabularySnapshot,
             new: VocabularySnapshot) -> list[ActivityRecord]:
    """Assign every added/removed triple to exactly one activity record.

    Rules are tried in priority order and the first that matches a triple
    claims it: Modularization, Partitioning, Refactoring, Alignment,
    Reusing, Complex Addition/Deletion, Modification, Translating, Common
    Metadata, External Metadata, Simple Addition/Deletion. Leftovers become
    Modification when they touch a pre-existing element, else Simple
    Addition/Deletion.
    """
    if not delta.added and not delta.removed:
        return []
    return _Classifier(delta, old, new).run()


def suggest_version(current: VersionLabel, activities: Iterable[ActivityRecord]) -> VersionLabel:
    categories = {a.category for a in activities}
    for category in (Category.STRUCTURAL, Category.SEMANTIC, Category.BASIC):
        if category in categories:
            return current.bump(category.value)
    return current


# ---------------------------------------------------------------------------
# Reporting


def format_iri(iri: str, prefixes: Mapping[str, str]) -> str:
    pm = prefixes if isinstance(prefixes, PrefixMap) else PrefixMap(prefixes)
    return pm.shorten(iri) or f"<{iri}>"


def _counts(added: int, removed: int) -> str:
    parts = ([f"+{added}"] if added else []) + ([f"-{removed}"] if removed else [])
    noun = "triple" if added + removed == 1 else "triples"
    return f"({'/'.join(parts)} {noun})"


def describe(record: ActivityRecord, prefixes: Mapping[str, str]) -> str:
    if record.kind is ActivityKind.ACT10:
        target = ", ".join(record.paths)
    elif record.kind is ActivityKind.ACT11:
        sources = sorted({e.path for e in record.evidence if e.change == REMOVED})
        targets = sorted({e.path for e in record.evidence if e.change == ADDED})
        target = f"{', '.join(sources)} -> {', '.join(targets)}"
    elif record.subject_iris:
        target = ", ".join(format_iri(i, prefixes) for i in sorted(record.subject_iris))
    else:
        target = ", ".join(sorted({str(e.triple.subject) for e in record.evidence}))
    return f"{record.kind.display_name}: {target} {_counts(record.added, record.removed)}"


def render_changelog(delta: TripleDelta, activities: list[ActivityRecord],
                     prefixes: Mapping[str, str]) -> str:
    lines = ["Vocabulary changelog"]
    if not activities and not delta:
        lines.append("No changes.")
        return "\n".join(lines) + "\n"
    lines.append(
        f"{len(delta.added)} triple(s) added, {len(delta.removed)} removed; "
        f"{len(delta.files_added)} file(s) added, {len(delta.files_removed)} removed"
    )
    for category in (Category.STRUCTURAL, Category.SEMANTIC, Category.BASIC):
        records = sorted((a for a in activities if a.category is category), key=_record_key)
        if not records:
            continue
        lines.append("")
        lines.append(category.value)
        lines.extend(f"  {describe(r, prefixes)}" for r in records)
    if not activities:
        lines.append("")
        lines.append("No triple changes.")
    return "\n".join(lines) + "\n"


def activity_report(activities: list[ActivityRecord], delta: TripleDelta,
                    current: Optional[VersionLabel] = None,
                    suggested: Optional[VersionLabel] = None) -> dict:
    """Machine-readable form of a classified diff (see docs/report-format.md)."""
    return {
        "format": "git4voc-diff/1",
        "summary": {
            "added": len(delta.added),
            "removed": len(delta.removed),
            "files_added": sorted(delta.files_added),
            "files_removed": sorted(delta.files_removed),
        },
        "current_version": str(current) if current else None,
        "suggested_version": str(suggested) if suggested else None,
        "activities": [
            {
                "kind": r.kind.name,
                "name": r.kind.display_name,
                "category": r.category.value,
                "subjects": sorted(r.subject_iris),
                "paths": r.paths,
                "evidence": [
                    {"path": e.path, "change": e.change, "triple": e.triple.n_triples()}
                    for e in r.evidence
                ],
            }
            for r in activities
        ],
    }
