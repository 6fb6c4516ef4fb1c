"""Single-page HTML documentation for a vocabulary snapshot."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from html import escape
from typing import Optional

from .rdf import OWL, RDF, RDF_TYPE, RDFS, Iri, Literal, PrefixMap, local_name
from .snapshot import VocabularySnapshot
from .turtle import canonical_order


class ElementKind(str, enum.Enum):
    CLASS = "Class"
    OBJECT_PROPERTY = "ObjectProperty"
    DATATYPE_PROPERTY = "DatatypeProperty"
    PROPERTY = "Property"
    OTHER = "Other"


_TYPE_KINDS = {
    OWL + "Class": ElementKind.CLASS,
    RDFS + "Class": ElementKind.CLASS,
    OWL + "ObjectProperty": ElementKind.OBJECT_PROPERTY,
    OWL + "DatatypeProperty": ElementKind.DATATYPE_PROPERTY,
    RDF + "Property": ElementKind.PROPERTY,
    OWL + "AnnotationProperty": ElementKind.PROPERTY,
}
_KIND_RANK = [ElementKind.CLASS, ElementKind.OBJECT_PROPERTY, ElementKind.DATATYPE_PROPERTY,
              ElementKind.PROPERTY, ElementKind.OTHER]


@dataclass
class ElementDoc:
    iri: str
    kind: ElementKind
    labels: dict[str, list[str]] = field(default_factory=dict)
    comments: dict[str, list[str]] = field(default_factory=dict)
    super: list[str] = field(default_factory=list)
    domains: list[str] = field(default_factory=list)
    ranges: list[str] = field(default_factory=list)
    defined_in: str = ""
    anchor: str = ""
    name: str = ""


@dataclass(frozen=True)
class DocOptions:
    title: Optional[str] = None
    primary_language: str = "en"


_STYLE = """
body { font-family: sans-serif; max-width: 60em; margin: 2em auto; line-height: 1.4; }
nav ul { columns: 3; }
section.element { border-top: 1px solid #ccc; padding-top: .5em; }
code { background: #f4f4f4; }
.lang { color: #666; font-size: .85em; }
dt { font-weight: bold; }
""".strip()


def _kind(types: set[str], predicates: set[str]) -> ElementKind:
    kinds = {_TYPE_KINDS[t] for t in types if t in _TYPE_KINDS}
    if kinds:
        return min(kinds, key=_KIND_RANK.index)
    # untyped elements: infer from how they are described
    if RDFS + "subClassOf" in predicates:
        return ElementKind.CLASS
    if predicates & {RDFS + "subPropertyOf", RDFS + "domain", RDFS + "range"}:
        return ElementKind.PROPERTY
    return ElementKind.OTHER


def collect_elements(snapshot: VocabularySnapshot) -> list[ElementDoc]:
    """One :class:`ElementDoc` per element, in page order with unique anchors."""
    namespaces = tuple(snapshot.base_namespaces)
    elements = snapshot.elements()
    triples = defaultdict(list)
    first_seen: dict[str, str] = {}
    first_typed: dict[str, str] = {}
    for path, graph in snapshot.files.items():
        for t in canonical_order(graph):
            if isinstance(t.subject, Iri) and t.subject.value in elements:
                triples[t.subject.value].append(t)
                first_seen.setdefault(t.subject.value, path)
                if t.predicate.value == RDF_TYPE:
                    first_typed.setdefault(t.subject.value, path)
    home = {**first_seen, **first_typed}

    docs: list[ElementDoc] = []
    for iri in elements:
        ts = triples[iri]
        types = {t.object.value for t in ts if t.predicate.value == RDF_TYPE and isinstance(t.object, Iri)}
        doc = ElementDoc(iri, _kind(types, {t.predicate.value for t in ts}),
                         defined_in=home[iri], name=local_name(iri, namespaces) or iri)
        for t in ts:
            p, o = t.predicate.value, t.object
            if p in (RDFS + "label", RDFS + "comment") and isinstance(o, Literal):
                target = doc.labels if p == RDFS + "label" else doc.comments
                target.setdefault(o.language or "", []).append(o.lexical)
            elif isinstance(o, Iri):
                if p in (RDFS + "subClassOf", RDFS + "subPropertyOf"):
                    doc.super.append(o.value)
                elif p == RDFS + "domain":
                    doc.domains.append(o.value)
                elif p == RDFS + "range":
                    doc.ranges.append(o.value)
        docs.append(doc)

    def order(d: ElementDoc) -> tuple:
        group = 0 if d.kind is ElementKind.CLASS else 2 if d.kind is ElementKind.OTHER else 1
        return (group, d.name, d.iri)

    docs.sort(key=order)
    used: dict[str, int] = {}
    taken = set()
    for d in docs:
        base = "".join(c if c.isalnum() or c in "-_." else "_" for c in d.name) or "element"
        anchor = base
        n = used.get(base, 1)
        while anchor in taken:
            n += 1
            anchor = f"{base}-{n}"
        used[base] = n
        taken.add(anchor)
        d.anchor = anchor
    return docs


def _display_label(doc: ElementDoc, language: str) -> str:
    if doc.labels.get(language):
        return sorted(doc.labels[language])[0]
    for lang in sorted(doc.labels):
        if doc.labels[lang]:
            return sorted(doc.labels[lang])[0]
    return doc.name


def _texts(values: dict[str, list[str]]) -> list[str]:
    out = []
    for lang in sorted(values):
        for text in sorted(values[lang]):
            tag = f' <span class="lang">@{escape(lang)}</span>' if lang else ""
            out.append(f"<li>{escape(text)}{tag}</li>")
    return out


def generate_docs(snapshot: VocabularySnapshot, options: DocOptions = DocOptions()) -> str:
    """Render one self-contained HTML5 page (also well-formed XML)."""
    docs = collect_elements(snapshot)
    prefixes = snapshot.prefixes()
    title = options.title or _ontology_title(snapshot, options.primary_language) \
        or "Vocabulary documentation"
    anchors = {d.iri: d.anchor for d in docs}

    def ref(iri: str) -> str:
        text = escape(_short(iri, prefixes))
        if iri in anchors:
            return f'<a href="#{escape(anchors[iri])}">{text}</a>'
        return f'<a href="{escape(iri)}">{text}</a>'

    out = [
        "<!DOCTYPE html>",
        '<html lang="en">',
        "<head>",
        '<meta charset="utf-8"/>',
        f"<title>{escape(title)}</title>",
        f"<style>{_STYLE}</style>",
        "</head>",
        "<body>",
        "<header>",
        f"<h1>{escape(title)}</h1>",
    ]
    if prefixes:
        out.append("<h2>Namespaces</h2>")
        out.append("<table>")
        for label in sorted(prefixes):
            out.append(f"<tr><td><code>{escape(label)}:</code></td>"
                       f"<td><code>{escape(prefixes[label])}</code></td></tr>")
        out.append("</table>")
    out.append("</header>")

    if not docs:
        out.append("<main><p>No elements</p></main>")
    else:
        out.append('<nav id="toc">')
        out.append("<h2>Contents</h2>")
        out.append("<ul>")
        for d in docs:
            out.append(f'<li><a href="#{escape(d.anchor)}">'
                       f"{escape(_display_label(d, options.primary_language))}</a></li>")
        out.append("</ul>")
        out.append("</nav>")
        out.append("<main>")
        heading = None
        for d in docs:
            group = "Classes" if d.kind is ElementKind.CLASS else \
                "Other elements" if d.kind is ElementKind.OTHER else "Properties"
            if group != heading:
                out.append(f"<h2>{group}</h2>")
                heading = group
            out.extend(_section(d, options, ref))
        out.append("</main>")
    out.append("</body>")
    out.append("</html>")
    return "\n".join(out) + "\n"


def _section(d: ElementDoc, options: DocOptions, ref) -> list[str]:
    out = [
        f'<section class="element" id="{escape(d.anchor)}">',
        f"<h3>{escape(_display_label(d, options.primary_language))}</h3>",
        "<dl>",
        f"<dt>IRI</dt><dd><code>{escape(d.iri)}</code></dd>",
        f"<dt>Kind</dt><dd>{d.kind.value}</dd>",
        f"<dt>Defined in</dt><dd><code>{escape(d.defined_in)}</code></dd>",
    ]
    if d.labels:
        out.append("<dt>Labels</dt><dd><ul>" + "".join(_texts(d.labels)) + "</ul></dd>")
    if d.comments:
        out.append("<dt>Comments</dt><dd><ul>" + "".join(_texts(d.comments)) + "</ul></dd>")
    for title, iris in (("Super" + ("classes" if d.kind is ElementKind.CLASS else "-elements"), d.super),
                        ("Domain", d.domains), ("Range", d.ranges)):
        if iris:
            out.append(f"<dt>{title}</dt><dd>" + ", ".join(ref(i) for i in sorted(iris)) + "</dd>")
    out.append("</dl>")
    out.append("</section>")
    return out


def _short(iri: str, prefixes: PrefixMap) -> str:
    return prefixes.shorten(iri) or iri


_TITLE_PREDICATES = (RDFS + "label", "http://purl.org/dc/terms/title",
                     "http://purl.org/dc/elements/1.1/title")


def _ontology_title(snapshot: VocabularySnapshot, language: str) -> Optional[str]:
    ontologies = set()
    titles = defaultdict(list)
    for _, t in snapshot.items():
        if t.predicate.value == RDF_TYPE and t.object == Iri(OWL + "Ontology"):
            ontologies.add(t.subject)
        elif t.predicate.value in _TITLE_PREDICATES and isinstance(t.object, Literal):
            titles[t.subject].append((t.object.language != language, t.object.lexical))
    candidates = [c for s in ontologies for c in titles[s]]
    return min(candidates)[1] if candidates else None
