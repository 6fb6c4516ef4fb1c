"""Shared test vocabularies and hypothesis strategies."""

from __future__ import annotations

from hypothesis import strategies as st

from git4voc.rdf import XSD, BlankNode, Graph, Iri, Literal, PrefixMap, Triple
from git4voc.snapshot import VocabularySnapshot, parse_files

EX = "http://ex.org/v#"
EXT = "http://ext.org/ns#"
NS = frozenset({EX})

HEADER = """@prefix ex: <http://ex.org/v#> .
@prefix ext: <http://ext.org/ns#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
"""

BASE = HEADER + """
ex:Vehicle a owl:Class ; rdfs:label "Vehicle"@en ; rdfs:comment "A vehicle."@en .
ex:Car a owl:Class ; rdfs:subClassOf ex:Vehicle ; rdfs:label "Car"@en .
ex:Person a owl:Class ; rdfs:label "Person"@en .
ex:owns a owl:ObjectProperty ; rdfs:domain ex:Person ; rdfs:range ex:Vehicle .
ex:drives a owl:ObjectProperty ; rdfs:domain ex:Person ; rdfs:range ex:Car .
ex:rents a owl:ObjectProperty ; rdfs:domain ex:Person ; rdfs:range ex:Car .
"""

_CLASSES, _PROPS = BASE.split("ex:owns", 1)

# One (old files, new files) pair per activity, modelled on the activity table's examples.
ACTIVITY_FIXTURES = {
    # a class in the last level of the taxonomy
    "ACT1": ({"v.ttl": BASE}, {"v.ttl": BASE + 'ex:SportsCar a owl:Class ; '
                               'rdfs:subClassOf ex:Car ; rdfs:label "Sports car"@en .\n'}),
    # an object property that becomes super property of two existing ones
    "ACT2": ({"v.ttl": BASE}, {"v.ttl": BASE + "ex:uses a owl:ObjectProperty .\n"
                               "ex:drives rdfs:subPropertyOf ex:uses .\n"
                               "ex:rents rdfs:subPropertyOf ex:uses .\n"}),
    # domain and range of an existing object property changed
    "ACT3": ({"v.ttl": BASE}, {"v.ttl": BASE.replace(
        "rdfs:domain ex:Person ; rdfs:range ex:Vehicle",
        "rdfs:domain ex:Car ; rdfs:range ex:Person")}),
    # a new local concept defined through an external resource
    "ACT4": ({"v.ttl": BASE}, {"v.ttl": BASE + "ex:Truck a owl:Class ; rdfs:subClassOf ext:Lorry .\n"}),
    "ACT5": ({"v.ttl": BASE}, {"v.ttl": BASE + "ex:Car owl:equivalentClass ext:Automobile .\n"}),
    # rename a class used in several domains and ranges
    "ACT6": ({"v.ttl": BASE}, {"v.ttl": BASE.replace("ex:Car", "ex:Automobile")}),
    "ACT7": ({"v.ttl": BASE}, {"v.ttl": BASE + 'ex:Car rdfs:comment "A car."@en .\n'}),
    "ACT8": ({"v.ttl": BASE}, {"v.ttl": BASE + 'ex:Car skos:prefLabel "Car"@en .\n'}),
    "ACT9": ({"v.ttl": BASE}, {"v.ttl": BASE + 'ex:Car rdfs:label "Auto"@de .\n'}),
    # a new module file
    "ACT10": ({"v.ttl": BASE}, {"v.ttl": BASE, "Fuel.ttl": HEADER + (
        'ex:Fuel a owl:Class ; rdfs:label "Fuel"@en .\n'
        "ex:fuelOf a owl:ObjectProperty ; rdfs:domain ex:Fuel ; rdfs:range ex:Vehicle .\n")}),
    # the existing vocabulary split into two modules
    "ACT11": ({"v.ttl": BASE}, {"v.ttl": _CLASSES, "props.ttl": HEADER + "ex:owns" + _PROPS}),
}

EXPECTED_CATEGORY = {
    "ACT1": "Basic", "ACT7": "Basic", "ACT9": "Basic",
    "ACT2": "Semantic", "ACT3": "Semantic", "ACT4": "Semantic", "ACT5": "Semantic",
    "ACT6": "Semantic", "ACT8": "Semantic",
    "ACT10": "Structural", "ACT11": "Structural",
}


def snapshot(files: dict[str, str], namespaces=NS) -> VocabularySnapshot:
    snap, errors = parse_files(files, namespaces)
    assert not errors, errors
    return snap


# ---------------------------------------------------------------------------
# hypothesis strategies

_iri_names = st.sampled_from(["A", "B", "Car", "p", "q", "has-part", "x.y", "Ä", "n1"])
iris = st.builds(lambda ns, n: Iri(ns + n), st.sampled_from([EX, EXT, "http://other.org/"]), _iri_names)
blank_nodes = st.builds(BlankNode, st.sampled_from(["b0", "b1", "x_y"]))
_text = st.text(st.characters(blacklist_categories=("Cs",)), max_size=12)
literals = st.one_of(
    st.builds(Literal, _text),
    st.builds(Literal, _text, st.sampled_from(["en", "de", "en-gb"])),
    st.builds(lambda i: Literal(str(i), datatype=XSD + "integer"), st.integers(-10**6, 10**6)),
    st.builds(lambda b: Literal(b, datatype=XSD + "boolean"), st.sampled_from(["true", "false"])),
    st.builds(lambda d: Literal(d, datatype=XSD + "decimal"), st.sampled_from(["1.5", "-0.25", "10.0"])),
    st.builds(lambda t: Literal(t, datatype=XSD + "date"), st.sampled_from(["2020-01-01"])),
)
triples = st.builds(Triple, st.one_of(iris, blank_nodes), iris, st.one_of(iris, blank_nodes, literals))
PREFIXES = PrefixMap({"ex": EX, "ext": EXT})


def graphs(max_size: int = 40):
    return st.builds(lambda ts: Graph(frozenset(ts), PREFIXES), st.sets(triples, max_size=max_size))


def snapshots(max_triples: int = 200, max_files: int = 5):
    paths = st.sampled_from(["a.ttl", "b.ttl", "m/c.ttl", "m/d.ttl", "translations/de.ttl"])
    files = st.dictionaries(paths, st.sets(triples, max_size=max_triples // max_files),
                            max_size=max_files)
    return st.builds(lambda fs: VocabularySnapshot(
        {p: Graph(frozenset(ts), PREFIXES) for p, ts in fs.items()}, NS), files)
