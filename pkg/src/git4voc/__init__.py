"""Git tooling for collaborative RDF vocabulary development.

Turtle parsing and canonical layout, semantic diffs classified into
vocabulary-editing activities, a local linter, HTML documentation, a
role/branch commit policy and the Git hooks that tie them together.
"""

from .docgen import DocOptions, generate_docs
from .lint import ConfigError, LintConfig, LintFinding, LintReport, check_structure, lint
from .policy import BranchRule, Decision, PolicyConfig, Role, authorize, load_config
from .rdf import BlankNode, Graph, Iri, Literal, PrefixMap, Triple
from .semdiff import (
    ActivityKind,
    ActivityRecord,
    Category,
    MissingRemoval,
    TripleDelta,
    apply_delta,
    classify,
    compute_delta,
    render_changelog,
    suggest_version,
)
from .snapshot import VocabularySnapshot, parse_files
from .turtle import ParseError, TurtleSyntaxError, is_canonical, parse, serialize_canonical
from .version import VersionLabel

__version__ = "0.1.0"

__all__ = [
    "ActivityKind", "ActivityRecord", "BlankNode", "BranchRule", "Category", "ConfigError",
    "Decision", "DocOptions", "Graph", "Iri", "LintConfig", "LintFinding", "LintReport",
    "Literal", "MissingRemoval", "ParseError", "PolicyConfig", "PrefixMap", "Role", "Triple",
    "TripleDelta", "TurtleSyntaxError", "VersionLabel", "VocabularySnapshot", "apply_delta",
    "authorize", "check_structure", "classify", "compute_delta", "generate_docs",
    "is_canonical", "lint", "load_config", "parse", "parse_files", "render_changelog",
    "serialize_canonical", "suggest_version",
]
