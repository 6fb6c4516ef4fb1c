"""Local vocabulary linter: syntax, naming, metadata, modularity and language checks."""

from __future__ import annotations

import enum
import json
import re
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import PurePosixPath
from typing import Optional

from .rdf import OWL, RDF, RDF_TYPE, RDFS, Iri, Literal, Triple, local_name
from .snapshot import VocabularySnapshot
from .turtle import ParseError, canonical_order


class ConfigError(ValueError):
    """Malformed configuration; ``line`` points into the config file when known."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class Severity(str, enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"
    INFO = "Info"


@dataclass(frozen=True)
class LintRule:
    code: str
    severity: Severity
    description: str


RULES: dict[str, LintRule] = {
    r.code: r
    for r in (
        LintRule("G4V000", Severity.ERROR, "Turtle syntax error"),
        LintRule("G4V001", Severity.WARNING, "element has no rdfs:label"),
        LintRule("G4V002", Severity.WARNING, "element has no rdfs:comment"),
        LintRule("G4V003", Severity.WARNING, "object/datatype property has no rdfs:domain"),
        LintRule("G4V004", Severity.WARNING, "property has no rdfs:range"),
        LintRule("G4V005", Severity.WARNING, "class local name is not UpperCamelCase"),
        LintRule("G4V006", Severity.WARNING, "property local name is not lowerCamelCase"),
        LintRule("G4V007", Severity.WARNING, "file holds more triples than the module limit"),
        LintRule("G4V009", Severity.INFO, "rdfs:label without a language tag"),
        LintRule("G4V010", Severity.WARNING, "element lacks a label in a required language"),
        LintRule("G4V011", Severity.WARNING, "several elements in one file share a label"),
        LintRule("G4V012", Severity.INFO, "element has no rdfs:isDefinedBy"),
        LintRule("G4V013", Severity.INFO, "vocabulary file is not a .ttl file"),
        LintRule("G4V020", Severity.INFO, "single-file vocabulary exceeds the module limit"),
        LintRule("G4V021", Severity.INFO, "too many files in one folder"),
        LintRule("G4V022", Severity.WARNING, "translation file holds non-label/comment triples"),
    )
}

CLASS_TYPES = frozenset({OWL + "Class"})
DOMAIN_PROPERTY_TYPES = frozenset({OWL + "ObjectProperty", OWL + "DatatypeProperty"})
PROPERTY_TYPES = DOMAIN_PROPERTY_TYPES | {RDF + "Property"}
TEXT_PREDICATES = frozenset({RDFS + "label", RDFS + "comment"})

UPPER_CAMEL_RE = re.compile(r"[A-Z][A-Za-z0-9]*\Z")
LOWER_CAMEL_RE = re.compile(r"[a-z][A-Za-z0-9]*\Z")


@dataclass(frozen=True)
class LintConfig:
    required_languages: tuple[str, ...] = ()
    max_triples_per_file: int = 300
    max_files_per_folder: int = 20
    translations_dir: str = "translations"
    base_namespaces: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if isinstance(self.max_triples_per_file, bool) or not isinstance(self.max_triples_per_file, int) \
                or self.max_triples_per_file < 1:
            raise ConfigError("max_triples_per_file must be a positive integer")
        if isinstance(self.max_files_per_folder, bool) or not isinstance(self.max_files_per_folder, int) \
                or self.max_files_per_folder < 1:
            raise ConfigError("max_files_per_folder must be a positive integer")
        for lang in self.required_languages:
            if not re.fullmatch(r"[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*", lang):
                raise ConfigError(f"invalid language tag in required_languages: {lang!r}")
        if not self.translations_dir or "/" in self.translations_dir.strip("/"):
            raise ConfigError("translations_dir must be a single folder name")
        object.__setattr__(self, "required_languages",
                           tuple(sorted({lang.lower() for lang in self.required_languages})))
        object.__setattr__(self, "base_namespaces", frozenset(self.base_namespaces))


@dataclass(frozen=True)
class LintFinding:
    rule: str
    file: str
    line: Optional[int]
    subject: Optional[str]
    message: str

    def __post_init__(self) -> None:
        if self.rule not in RULES:
            raise ValueError(f"unknown rule code {self.rule}")
        if not self.message:
            raise ValueError("finding message must not be empty")

    @property
    def severity(self) -> Severity:
        return RULES[self.rule].severity

    def sort_key(self) -> tuple:
        return (self.file, self.line or 0, self.rule, self.subject or "", self.message)

    def __str__(self) -> str:
        where = f"{self.file}:{self.line}:" if self.line else f"{self.file}:"
        return f"{where} {self.rule} {self.severity.value} {self.message}"


@dataclass(frozen=True)
class LintReport:
    findings: tuple[LintFinding, ...] = ()
    counts: dict[Severity, int] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.findings), key=LintFinding.sort_key))
        object.__setattr__(self, "findings", ordered)
        counts = {s: 0 for s in Severity}
        for f in ordered:
            counts[f.severity] += 1
        object.__setattr__(self, "counts", counts)

    def __len__(self) -> int:
        return len(self.findings)

    def merged(self, *others: LintReport) -> LintReport:
        findings = list(self.findings)
        for other in others:
            findings.extend(other.findings)
        return LintReport(tuple(findings))

    def only_files(self, files: Iterable[str]) -> LintReport:
        keep = set(files)
        return LintReport(tuple(f for f in self.findings if f.file in keep))

    def blocking(self, strict: bool = False) -> bool:
        if self.counts[Severity.ERROR]:
            return True
        return strict and self.counts[Severity.WARNING] > 0

    def format_text(self) -> str:
        return "".join(f"{f}\n" for f in self.findings)

    def summary(self) -> str:
        return ", ".join(f"{self.counts[s]} {s.value.lower()}(s)" for s in Severity)

    def to_json(self) -> str:
        payload = {
            "format": "git4voc-lint/1",
            "counts": {s.value: n for s, n in self.counts.items()},
            "findings": [
                {"rule": f.rule, "severity": f.severity.value, "file": f.file,
                 "line": f.line, "subject": f.subject, "message": f.message}
                for f in self.findings
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class _Facts:
    """Per-element facts gathered across every file of a snapshot."""

    def __init__(self, snapshot: VocabularySnapshot, config: LintConfig) -> None:
        snap = snapshot.with_namespaces(config.base_namespaces) if config.base_namespaces else snapshot
        self.namespaces = tuple(snap.base_namespaces)
        self.elements = sorted(snap.elements())
        self.config = config
        self.triples: dict[str, dict[str, list[Triple]]] = defaultdict(lambda: defaultdict(list))
        element_set = set(self.elements)
        for path, graph in snapshot.files.items():
            for t in canonical_order(graph):
                if isinstance(t.subject, Iri) and t.subject.value in element_set:
                    self.triples[t.subject.value][path].append(t)
        self.snapshot = snapshot

    def is_translation(self, path: str) -> bool:
        return self.config.translations_dir.strip("/") in PurePosixPath(path).parent.parts

    def values(self, element: str, predicate: str) -> list:
        return [t.object for ts in self.triples[element].values() for t in ts
                if t.predicate.value == predicate]

    def types(self, element: str) -> set[str]:
        return {o.value for o in self.values(element, RDF_TYPE) if isinstance(o, Iri)}

    def home(self, element: str) -> tuple[str, Optional[int]]:
        by_path = self.triples[element]
        paths = sorted(by_path)
        primary = [p for p in paths if not self.is_translation(p)] or paths
        typed = [p for p in primary if any(t.predicate.value == RDF_TYPE for t in by_path[p])]
        path = (typed or primary)[0]
        return path, self.snapshot.files[path].line_of(by_path[path][0])


def _syntax_findings(errors: Iterable[ParseError]) -> list[LintFinding]:
    return [LintFinding("G4V000", e.file, e.line, None,
                        f"{e.kind.value} at column {e.column}: {e.message}") for e in errors]


def lint(snapshot: VocabularySnapshot, config: LintConfig = LintConfig(),
         syntax_errors: Iterable[ParseError] = ()) -> LintReport:
    """Run the element- and file-level rules (G4V000-G4V013)."""
    syntax_errors = list(syntax_errors)
    findings = _syntax_findings(syntax_errors)
    facts = _Facts(snapshot, config)

    for element in facts.elements:
        file, line = facts.home(element)
        types = facts.types(element)
        labels = [o for o in facts.values(element, RDFS + "label") if isinstance(o, Literal)]

        def add(code: str, message: str) -> None:
            findings.append(LintFinding(code, file, line, element, message))

        if not labels:
            add("G4V001", f"<{element}> has no rdfs:label")
        if not facts.values(element, RDFS + "comment"):
            add("G4V002", f"<{element}> has no rdfs:comment")
        if types & DOMAIN_PROPERTY_TYPES and not facts.values(element, RDFS + "domain"):
            add("G4V003", f"property <{element}> has no rdfs:domain")
        if types & PROPERTY_TYPES and not facts.values(element, RDFS + "range"):
            add("G4V004", f"property <{element}> has no rdfs:range")
        name = local_name(element, facts.namespaces)
        if name and types & CLASS_TYPES and not UPPER_CAMEL_RE.match(name):
            add("G4V005", f"class name {name!r} is not UpperCamelCase")
        if name and types & PROPERTY_TYPES and not LOWER_CAMEL_RE.match(name):
            add("G4V006", f"property name {name!r} is not lowerCamelCase")
        if config.required_languages:
            present = {lab.language for lab in labels if lab.language}
            missing = [lang for lang in config.required_languages
                       if not any(p == lang or p.startswith(lang + "-") for p in present)]
            if missing:
                add("G4V010", f"<{element}> has no rdfs:label in: {', '.join(missing)}")
        if not facts.values(element, RDFS + "isDefinedBy"):
            add("G4V012", f"<{element}> has no rdfs:isDefinedBy")

        for path, ts in facts.triples[element].items():
            for t in ts:
                if t.predicate.value == RDFS + "label" and isinstance(t.object, Literal) \
                        and t.object.language is None:
                    findings.append(LintFinding(
                        "G4V009", path, snapshot.files[path].line_of(t), element,
                        f"label {t.object.lexical!r} of <{element}> has no language tag"))

    for path, graph in snapshot.files.items():
        if len(graph) > config.max_triples_per_file:
            findings.append(LintFinding(
                "G4V007", path, None, None,
                f"{len(graph)} triples exceed the limit of {config.max_triples_per_file}"))
        shared: dict[tuple[str, str], list[tuple[str, Triple]]] = defaultdict(list)
        for element in facts.elements:
            for t in facts.triples[element].get(path, ()):
                if t.predicate.value == RDFS + "label" and isinstance(t.object, Literal):
                    shared[(t.object.lexical, t.object.language or "")].append((element, t))
        for (text, lang), owners in sorted(shared.items()):
            names = sorted({e for e, _ in owners})
            if len(names) > 1:
                first = min(owners, key=lambda et: et[0])
                shown = f"{text!r}@{lang}" if lang else repr(text)
                findings.append(LintFinding(
                    "G4V011", path, graph.line_of(first[1]), names[0],
                    f"label {shown} is shared by {', '.join(f'<{n}>' for n in names)}"))

    for path in sorted(set(snapshot.files) | {e.file for e in syntax_errors}):
        if PurePosixPath(path).suffix != ".ttl":
            findings.append(LintFinding(
                "G4V013", path, None, None, "vocabulary files should use Turtle with a .ttl extension"))
    return LintReport(tuple(findings))


def check_structure(snapshot: VocabularySnapshot, config: LintConfig = LintConfig()) -> LintReport:
    """File and folder organisation rules (G4V020-G4V022)."""
    findings: list[LintFinding] = []
    limit = config.max_triples_per_file
    if len(snapshot.files) == 1:
        (path, graph), = snapshot.files.items()
        if len(graph) > limit:
            findings.append(LintFinding(
                "G4V020", path, None, None,
                f"single-file vocabulary has {len(graph)} triples (limit {limit}); "
                "consider splitting it into module files"))

    folders: dict[str, list[str]] = defaultdict(list)
    for path in snapshot.files:
        folders[PurePosixPath(path).parent.as_posix()].append(path)
    for folder, paths in sorted(folders.items()):
        prefix = "" if folder == "." else folder + "/"
        has_subfolders = any(
            other != folder and (folder == "." or other.startswith(prefix)) for other in folders
        )
        if len(paths) > config.max_files_per_folder and not has_subfolders:
            findings.append(LintFinding(
                "G4V021", folder, None, None,
                f"{len(paths)} files in one folder (limit {config.max_files_per_folder}); "
                "group modules into subfolders"))

    translations = config.translations_dir.strip("/")
    for path, graph in snapshot.files.items():
        if translations not in PurePosixPath(path).parent.parts:
            continue
        for t in canonical_order(graph):
            if t.predicate.value not in TEXT_PREDICATES:
                findings.append(LintFinding(
                    "G4V022", path, graph.line_of(t),
                    t.subject.value if isinstance(t.subject, Iri) else None,
                    f"translation files should only hold rdfs:label/rdfs:comment, found <{t.predicate.value}>"))
    return LintReport(tuple(findings))
