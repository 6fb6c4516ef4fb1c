import json
from collections import Counter
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from git4voc.lint import ConfigError, LintConfig, LintFinding, LintReport, Severity, check_structure, lint
from git4voc.rdf import OWL, RDF, RDF_TYPE, RDFS, Graph, Iri, Literal, PrefixMap, Triple
from git4voc.snapshot import VocabularySnapshot, parse_files
from vocab import EX, HEADER, NS

LISTING = (Path(__file__).parent / "data" / "listing.ttl").read_text(encoding="utf-8")
SCOR = "http://purl.org/eis/vocab/scor#"

CLEAN = HEADER + """
ex:Vehicle a owl:Class ;
  rdfs:label "Vehicle"@en, "Fahrzeug"@de ;
  rdfs:comment "Something that moves."@en ;
  rdfs:isDefinedBy ex: .
ex:owns a owl:ObjectProperty ;
  rdfs:label "owns"@en, "besitzt"@de ;
  rdfs:comment "Ownership."@en ;
  rdfs:domain ex:Vehicle ; rdfs:range ex:Vehicle ;
  rdfs:isDefinedBy ex: .
"""


def run(files: dict[str, str], **config) -> LintReport:
    cfg = LintConfig(**config)
    snap, errors = parse_files(files, cfg.base_namespaces)
    return lint(snap, cfg, errors).merged(check_structure(snap, cfg))


def codes(report: LintReport) -> Counter:
    return Counter(f.rule for f in report.findings)


def big_file(n: int) -> str:
    return HEADER + "".join(f'ex:Thing ex:value {i} .\n' for i in range(n))


def test_listing_findings():
    report = run({"listing.ttl": LISTING}, base_namespaces={SCOR})
    found = {(f.rule, f.subject) for f in report.findings}
    assert ("G4V009", SCOR + "Enable") in found
    assert ("G4V002", SCOR + "Enable") not in found
    assert not {rule for rule, _ in found} & {"G4V005", "G4V006"}
    g009 = [f for f in report.findings if f.rule == "G4V009"]
    assert len(g009) == 1 and g009[0].line == 17


def test_empty_snapshot_has_no_findings():
    assert lint(VocabularySnapshot()).findings == ()
    assert check_structure(VocabularySnapshot()).findings == ()


def test_clean_fixture_has_no_errors_or_warnings():
    report = run({"v.ttl": CLEAN}, required_languages=("en", "de"), base_namespaces=NS)
    assert report.counts[Severity.ERROR] == 0
    assert report.counts[Severity.WARNING] == 0
    assert not report.blocking(strict=True)


def test_file_size_threshold():
    assert codes(run({"a.ttl": big_file(300), "b.ttl": CLEAN}, base_namespaces=NS))["G4V007"] == 0
    report = run({"a.ttl": big_file(301), "b.ttl": CLEAN}, base_namespaces=NS)
    g007 = [f for f in report.findings if f.rule == "G4V007"]
    assert len(g007) == 1 and g007[0].file == "a.ttl"
    assert report.blocking(strict=True) and not report.blocking(strict=False)


def test_file_size_threshold_is_configurable():
    assert codes(run({"a.ttl": big_file(11)}, max_triples_per_file=10))["G4V007"] == 1


def test_required_language_missing():
    text = HEADER + ('ex:Vehicle a owl:Class ; rdfs:label "Vehicle"@en ; rdfs:comment "c"@en ; '
                     "rdfs:isDefinedBy ex: .\n")
    report = run({"v.ttl": text}, required_languages=("en", "de"), base_namespaces=NS)
    g010 = [f for f in report.findings if f.rule == "G4V010"]
    assert len(g010) == 1
    assert g010[0].subject == EX + "Vehicle"
    assert "de" in g010[0].message and "en" not in g010[0].message.split("in:")[1]


def test_regional_label_satisfies_base_language():
    text = HEADER + 'ex:Vehicle rdfs:label "Lorry"@en-GB .\n'
    assert codes(run({"v.ttl": text}, required_languages=("en",), base_namespaces=NS))["G4V010"] == 0


def test_shared_label_in_one_file():
    text = HEADER + 'ex:A rdfs:label "Same"@en .\nex:B rdfs:label "Same"@en .\nex:C rdfs:label "Same"@de .\n'
    assert codes(run({"v.ttl": text}, base_namespaces=NS))["G4V011"] == 1
    split = {"a.ttl": HEADER + 'ex:A rdfs:label "Same"@en .\n',
             "b.ttl": HEADER + 'ex:B rdfs:label "Same"@en .\n'}
    assert codes(run(split, base_namespaces=NS))["G4V011"] == 0


def test_naming_rules_only_apply_to_typed_elements():
    text = HEADER + ("ex:lower a owl:Class .\nex:Upper a owl:ObjectProperty .\n"
                     "ex:untyped_thing rdfs:label \"x\"@en .\n")
    found = {(f.rule, f.subject) for f in run({"v.ttl": text}, base_namespaces=NS).findings}
    assert ("G4V005", EX + "lower") in found
    assert ("G4V006", EX + "Upper") in found
    assert not any(s == EX + "untyped_thing" and r in ("G4V005", "G4V006") for r, s in found)


def test_non_turtle_extension():
    assert codes(run({"v.owl": CLEAN}, base_namespaces=NS))["G4V013"] == 1


def test_syntax_errors_are_blocking_findings():
    report = run({"bad.ttl": "ex:A a ex:B ."})
    (finding,) = [f for f in report.findings if f.rule == "G4V000"]
    assert (finding.file, finding.line) == ("bad.ttl", 1)
    assert finding.severity is Severity.ERROR
    assert report.blocking(strict=False)


def test_element_facts_span_files():
    files = {"a.ttl": HEADER + "ex:Car a owl:Class .\n",
             "translations/de.ttl": HEADER + 'ex:Car rdfs:label "Auto"@de ; rdfs:comment "c"@de .\n'}
    report = run(files, base_namespaces=NS)
    assert codes(report)["G4V001"] == 0 and codes(report)["G4V002"] == 0
    # findings are reported against the defining file, not the translation
    assert {f.file for f in report.findings if f.subject == EX + "Car"} == {"a.ttl"}


def test_structure_single_file_limit():
    assert codes(check_structure(parse_files({"v.ttl": big_file(299)})[0]))["G4V020"] == 0
    assert codes(check_structure(parse_files({"v.ttl": big_file(400)})[0]))["G4V020"] == 1


def test_structure_crowded_folder():
    files = {f"m/f{i}.ttl": HEADER + f"ex:T{i} a owl:Class .\n" for i in range(4)}
    snap = parse_files(files)[0]
    assert codes(check_structure(snap, LintConfig(max_files_per_folder=3)))["G4V021"] == 1
    assert codes(check_structure(snap, LintConfig(max_files_per_folder=4)))["G4V021"] == 0


def test_structure_translation_file_content():
    snap = parse_files({"translations/de.ttl": HEADER + 'ex:A rdfs:label "A"@de ; rdfs:subClassOf ex:B .\n'})[0]
    report = check_structure(snap)
    assert codes(report) == Counter({"G4V022": 1})


def test_report_order_and_rendering():
    report = run({"b.ttl": HEADER + "ex:x a owl:Class .\n", "a.ttl": "broken"}, base_namespaces=NS)
    keys = [(f.file, f.line or 0, f.rule) for f in report.findings]
    assert keys == sorted(keys)
    assert str(report.findings[0]).startswith("a.ttl:1: G4V000 Error ")
    payload = json.loads(report.to_json())
    assert payload["format"] == "git4voc-lint/1"
    assert payload["counts"]["Error"] == report.counts[Severity.ERROR]
    assert report.to_json() == run({"a.ttl": "broken", "b.ttl": HEADER + "ex:x a owl:Class .\n"},
                                   base_namespaces=NS).to_json()


def test_config_validation():
    with pytest.raises(ConfigError):
        LintConfig(max_triples_per_file=0)
    with pytest.raises(ConfigError):
        LintConfig(required_languages=("not a tag",))
    with pytest.raises(ValueError):
        LintFinding("G4V999", "f", None, None, "m")
    with pytest.raises(ValueError):
        LintFinding("G4V001", "f", None, None, "")


def test_adding_a_triple_keeps_size_finding():
    base = big_file(305)
    more = base + "ex:Thing ex:value 1000 .\n"
    assert codes(run({"a.ttl": base}))["G4V007"] == codes(run({"a.ttl": more}))["G4V007"] == 1


# --- brute-force oracle on small snapshots ---------------------------------------------

_names = ["Car", "car", "hasPart", "Has_part", "x1"]
_types = [OWL + "Class", OWL + "ObjectProperty", OWL + "DatatypeProperty", RDF + "Property"]
_small_triples = st.builds(
    lambda s, po: Triple(Iri(EX + s), *po),
    st.sampled_from(_names),
    st.one_of(
        st.tuples(st.just(Iri(RDF_TYPE)), st.sampled_from(_types).map(Iri)),
        st.tuples(st.just(Iri(RDFS + "label")),
                  st.builds(Literal, st.sampled_from(["A", "B"]),
                            st.sampled_from([None, "en", "de", "en-gb"]))),
        st.tuples(st.sampled_from([Iri(RDFS + "comment"), Iri(RDFS + "domain"), Iri(RDFS + "range"),
                                   Iri(RDFS + "isDefinedBy")]),
                  st.sampled_from(_names).map(lambda n: Iri(EX + n))),
    ),
)
_small_snapshots = st.dictionaries(
    st.sampled_from(["a.ttl", "b.ttl", "c.owl"]),
    st.sets(_small_triples, max_size=8), max_size=3,
).filter(lambda fs: sum(map(len, fs.values())) <= 20)


def oracle(files: dict[str, set], required: tuple[str, ...], limit: int) -> Counter:
    """Restates every rule condition directly over the triple sets."""
    everything = [(p, t) for p, ts in files.items() for t in ts]
    out: Counter = Counter()
    elements = {t.subject.value for _, t in everything}
    for e in elements:
        objs = lambda pred: [t.object for _, t in everything if t.subject.value == e and t.predicate.value == pred]
        types = {o.value for o in objs(RDF_TYPE)}
        labels = objs(RDFS + "label")
        name = e[len(EX):]
        checks = {
            "G4V001": not labels,
            "G4V002": not objs(RDFS + "comment"),
            "G4V003": bool(types & {OWL + "ObjectProperty", OWL + "DatatypeProperty"}) and not objs(RDFS + "domain"),
            "G4V004": bool(types & set(_types[1:])) and not objs(RDFS + "range"),
            "G4V005": OWL + "Class" in types and not (name[0].isupper() and name.isalnum()),
            "G4V006": bool(types & set(_types[1:])) and not (name[0].islower() and name.isalnum()),
            "G4V010": any(not any(l.language and l.language.split("-")[0] == r for l in labels)
                          for r in required),
            "G4V012": not objs(RDFS + "isDefinedBy"),
        }
        for code, hit in checks.items():
            if hit:
                out[(code, e)] += 1
        for p, t in everything:
            if t.subject.value == e and t.predicate.value == RDFS + "label" and t.object.language is None:
                out[("G4V009", e)] += 1
    for p, ts in files.items():
        if len(ts) > limit:
            out[("G4V007", p)] += 1
        if not p.endswith(".ttl"):
            out[("G4V013", p)] += 1
        groups: dict = {}
        for t in ts:
            if t.predicate.value == RDFS + "label":
                groups.setdefault((t.object.lexical, t.object.language), set()).add(t.subject.value)
        for owners in groups.values():
            if len(owners) > 1:
                out[("G4V011", p)] += 1
    return out


@settings(max_examples=300, deadline=None)
@given(_small_snapshots, st.sampled_from([(), ("en",), ("de", "en")]), st.sampled_from([3, 300]))
def test_lint_agrees_with_brute_force_oracle(files, required, limit):
    snap = VocabularySnapshot({p: Graph(frozenset(ts), PrefixMap()) for p, ts in files.items()}, NS)
    report = lint(snap, LintConfig(required_languages=required, max_triples_per_file=limit,
                                   base_namespaces=NS))
    got: Counter = Counter()
    for f in report.findings:
        key = f.file if f.rule in ("G4V007", "G4V011", "G4V013") else f.subject
        got[(f.rule, key)] += 1
    assert got == oracle(files, required, limit)
