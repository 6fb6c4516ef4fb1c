"""Turtle subset parser and the canonical "one triple per line" serializer.

Supported syntax: ``@prefix`` directives, prefixed names, ``<absolute IRIs>``,
the ``a`` keyword, single-line string literals with ``@lang`` or
``^^datatype``, integer/decimal/boolean shorthands, ``;`` and ``,`` lists,
``_:label`` blank nodes, ``[ ... ]`` anonymous blank nodes and ``#`` comments.

The parser recovers at statement boundaries so a file with several broken
statements reports all of them.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .rdf import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_INTEGER,
    BlankNode,
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Term,
    Triple,
    is_valid_iri,
)


class ErrorKind(str, enum.Enum):
    UNEXPECTED_TOKEN = "UnexpectedToken"
    UNDEFINED_PREFIX = "UndefinedPrefix"
    BAD_IRI = "BadIri"
    BAD_LITERAL = "BadLiteral"
    UNTERMINATED_STATEMENT = "UnterminatedStatement"


@dataclass(frozen=True)
class ParseError:
    file: str
    line: int
    column: int
    kind: ErrorKind
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column} {self.kind.value} {self.message}"


class TurtleSyntaxError(Exception):
    """Raised by :func:`parse` with every error found in the document."""

    def __init__(self, errors: list[ParseError]) -> None:
        self.errors = errors
        first = errors[0] if errors else None
        super().__init__(
            f"{len(errors)} syntax error(s); first: {first}" if first else "syntax error"
        )


# ---------------------------------------------------------------------------
# Lexer

_HEX = r"[0-9A-Fa-f]"
_UCHAR = rf"\\u{_HEX}{{4}}|\\U{_HEX}{{8}}"
_PN_PREFIX = r"[^\W\d_](?:[\w.\-]*[\w\-])?"
_PLX = rf"%{_HEX}{{2}}"
_PN_LOCAL = rf"(?:[\w:]|{_PLX})(?:(?:[\w.:\-]|{_PLX})*(?:[\w:\-]|{_PLX}))?"

_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\r\n]*)
  | (?P<iri><(?:[^<>"{{}}|^`\\\x00-\x20]|{_UCHAR})*>)
  | (?P<long_string>\"\"\"|''')
  | (?P<string>"(?:[^"\\\r\n]|\\.)*"|'(?:[^'\\\r\n]|\\.)*')
  | (?P<bnode>_:[A-Za-z0-9_]+)
  | (?P<pname>(?:{_PN_PREFIX})?:(?:{_PN_LOCAL})?)
  | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<decimal>[+-]?[0-9]*\.[0-9]+)
  | (?P<integer>[+-]?[0-9]+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<dtmark>\^\^)
  | (?P<punct>[.;,\[\]])
    """,
    re.VERBOSE,
)

_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_RE = re.compile(rf"\\(?:u({_HEX}{{4}})|U({_HEX}{{8}})|(.))", re.DOTALL)


_UNTERMINATED = "unterminated string literal"


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int
    error: Optional[ErrorKind] = None


def _unescape(text: str, allowed: str) -> str:
    def repl(m: re.Match[str]) -> str:
        hexa = m.group(1) or m.group(2)
        if hexa is not None:
            code = int(hexa, 16)
            if 0xD800 <= code <= 0xDFFF or code > 0x10FFFF:
                raise ValueError(f"invalid code point escape \\u{hexa}")
            return chr(code)
        char = m.group(3)
        if char not in allowed:
            raise ValueError(f"invalid escape sequence \\{char}")
        return _ESCAPES[char]

    return _ESCAPE_RE.sub(repl, text)


def tokenize(text: str) -> list[Token]:
    """Split Turtle text into tokens; lexical problems become ``error`` tokens."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    match = _TOKEN_RE.match
    while pos < n:
        m = match(text, pos)
        col = pos - line_start + 1
        if m is None:
            ch = text[pos]
            end = pos + 1
            if ch == "<":
                kind, msg = ErrorKind.BAD_IRI, "malformed IRI reference"
                end = _skip_to(text, pos, ">\n")
            elif ch in "\"'":
                kind, msg = ErrorKind.BAD_LITERAL, _UNTERMINATED
                end = _skip_to(text, pos, "\n", inclusive=False)
            elif ch == "@":
                kind, msg = ErrorKind.BAD_LITERAL, "malformed language tag"
            elif ch in "()":
                kind, msg = ErrorKind.UNEXPECTED_TOKEN, "collections are not supported"
            else:
                kind, msg = ErrorKind.UNEXPECTED_TOKEN, f"unexpected character {ch!r}"
            tokens.append(Token("error", msg, line, col, kind))
        else:
            kind = m.lastgroup
            end = m.end()
            if kind == "long_string":
                close = text.find(m.group(), end)
                end = n if close < 0 else close + 3
                tokens.append(Token("error", "multi-line string literals are not supported",
                                    line, col, ErrorKind.BAD_LITERAL))
            elif kind != "ws" and kind != "comment":
                tokens.append(Token(kind, m.group(), line, col))
        newlines = text.count("\n", pos, end)
        if newlines:
            line += newlines
            line_start = text.rindex("\n", pos, end) + 1
        pos = end
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _skip_to(text: str, pos: int, stops: str, inclusive: bool = True) -> int:
    i = pos + 1
    while i < len(text) and text[i] not in stops:
        i += 1
    if inclusive and i < len(text) and text[i] != "\n":
        i += 1
    return i


# ---------------------------------------------------------------------------
# Parser


class _StatementError(Exception):
    def __init__(self, token: Token, kind: ErrorKind, message: str) -> None:
        self.token = token
        self.kind = kind
        self.message = message


class _Parser:
    def __init__(self, tokens: list[Token], origin: str) -> None:
        self.tokens = tokens
        self.pos = 0
        self.origin = origin
        self.prefixes: dict[str, str] = {}
        self.triples: dict[Triple, int] = {}
        self.errors: list[ParseError] = []
        self.taken_labels = {t.value[2:] for t in tokens if t.kind == "bnode"}
        self.gen_counter = 0

    # token helpers
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, tok: Token, expected: str) -> _StatementError:
        if tok.kind == "eof":
            return _StatementError(tok, ErrorKind.UNTERMINATED_STATEMENT,
                                   f"end of file inside a statement (expected {expected})")
        if tok.kind == "error":
            return _StatementError(tok, tok.error or ErrorKind.UNEXPECTED_TOKEN, tok.value)
        return _StatementError(tok, ErrorKind.UNEXPECTED_TOKEN,
                               f"expected {expected}, found {tok.value!r}")

    def expect_punct(self, value: str) -> Token:
        tok = self.advance()
        if tok.kind != "punct" or tok.value != value:
            raise self.fail(tok, repr(value))
        return tok

    def is_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value == value

    def fresh_bnode(self) -> BlankNode:
        while True:
            self.gen_counter += 1
            label = f"gen{self.gen_counter}"
            if label not in self.taken_labels:
                return BlankNode(label)

    # grammar
    def parse(self) -> None:
        while self.peek().kind != "eof":
            try:
                self.statement()
            except _StatementError as exc:
                self.errors.append(
                    ParseError(self.origin, exc.token.line, exc.token.column, exc.kind, exc.message)
                )
                self.recover(exc.token)

    def recover(self, failed: Token) -> None:
        # the failing token has been consumed; resume after the statement's '.'
        if failed.kind == "punct" and failed.value == ".":
            return
        if failed.error is ErrorKind.BAD_LITERAL and failed.value == _UNTERMINATED:
            # the lexer already swallowed the rest of that line, '.' included
            return
        while True:
            tok = self.advance()
            if tok.kind == "eof" or (tok.kind == "punct" and tok.value == "."):
                return

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind == "langtag":
            self.directive()
            return
        pending: dict[Triple, int] = {}
        self.triples_block(pending)
        self.expect_punct(".")
        for triple, line in pending.items():
            self.triples.setdefault(triple, line)

    def directive(self) -> None:
        tok = self.advance()
        if tok.value != "@prefix":
            raise _StatementError(tok, ErrorKind.UNEXPECTED_TOKEN,
                                  f"unsupported directive {tok.value}")
        name = self.advance()
        if name.kind != "pname" or not name.value.endswith(":") or name.value.count(":") != 1:
            raise self.fail(name, "a prefix label such as 'ex:'")
        iri_tok = self.advance()
        if iri_tok.kind != "iri":
            raise self.fail(iri_tok, "a namespace IRI")
        namespace = self.iri_value(iri_tok)
        self.expect_punct(".")
        label = name.value[:-1]
        self.prefixes.pop(label, None)
        self.prefixes[label] = namespace

    def triples_block(self, out: dict[Triple, int]) -> None:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "[":
            subject = self.blank_property_list(out)
            if self.is_punct("."):
                return
        else:
            subject = self.subject()
        self.predicate_object_list(subject, out)

    def subject(self) -> Term:
        tok = self.advance()
        if tok.kind == "iri":
            return Iri(self.iri_value(tok))
        if tok.kind == "pname":
            return Iri(self.expand(tok))
        if tok.kind == "bnode":
            return BlankNode(tok.value[2:])
        raise self.fail(tok, "a subject")

    def predicate_object_list(self, subject, out: dict[Triple, int]) -> None:
        while True:
            predicate = self.verb()
            while True:
                obj, line = self.object(out)
                out.setdefault(Triple(subject, predicate, obj), line)
                if not self.is_punct(","):
                    break
                self.advance()
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.advance()
            tok = self.peek()
            if tok.kind == "punct" and tok.value in ".]":
                return

    def verb(self) -> Iri:
        tok = self.advance()
        if tok.kind == "word" and tok.value == "a":
            return Iri(RDF_TYPE)
        if tok.kind == "iri":
            return Iri(self.iri_value(tok))
        if tok.kind == "pname":
            return Iri(self.expand(tok))
        raise self.fail(tok, "a predicate")

    def object(self, out: dict[Triple, int]) -> tuple[Term, int]:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "[":
            return self.blank_property_list(out), tok.line
        self.advance()
        if tok.kind == "iri":
            return Iri(self.iri_value(tok)), tok.line
        if tok.kind == "pname":
            return Iri(self.expand(tok)), tok.line
        if tok.kind == "bnode":
            return BlankNode(tok.value[2:]), tok.line
        if tok.kind == "string":
            return self.literal(tok), tok.line
        if tok.kind == "integer":
            return Literal(tok.value, datatype=XSD_INTEGER), tok.line
        if tok.kind == "decimal":
            return Literal(tok.value, datatype=XSD_DECIMAL), tok.line
        if tok.kind == "word" and tok.value in ("true", "false"):
            return Literal(tok.value, datatype=XSD_BOOLEAN), tok.line
        raise self.fail(tok, "an object")

    def blank_property_list(self, out: dict[Triple, int]) -> BlankNode:
        self.expect_punct("[")
        node = self.fresh_bnode()
        if not self.is_punct("]"):
            self.predicate_object_list(node, out)
        self.expect_punct("]")
        return node

    def literal(self, tok: Token) -> Literal:
        try:
            lexical = _unescape(tok.value[1:-1], _ESCAPES.keys())
        except ValueError as exc:
            raise _StatementError(tok, ErrorKind.BAD_LITERAL, str(exc)) from None
        nxt = self.peek()
        if nxt.kind == "langtag":
            self.advance()
            try:
                return Literal(lexical, language=nxt.value[1:])
            except ValueError as exc:
                raise _StatementError(nxt, ErrorKind.BAD_LITERAL, str(exc)) from None
        if nxt.kind == "dtmark":
            self.advance()
            dt_tok = self.advance()
            if dt_tok.kind == "iri":
                datatype = self.iri_value(dt_tok)
            elif dt_tok.kind == "pname":
                datatype = self.expand(dt_tok)
            else:
                raise self.fail(dt_tok, "a datatype IRI")
            return Literal(lexical, datatype=datatype)
        return Literal(lexical)

    def iri_value(self, tok: Token) -> str:
        try:
            value = _unescape(tok.value[1:-1], "")
        except ValueError as exc:
            raise _StatementError(tok, ErrorKind.BAD_IRI, str(exc)) from None
        if not is_valid_iri(value):
            raise _StatementError(tok, ErrorKind.BAD_IRI,
                                  f"not an absolute IRI: <{value}> (relative IRIs are not supported)")
        return value

    def expand(self, tok: Token) -> str:
        label, _, local = tok.value.partition(":")
        namespace = self.prefixes.get(label)
        if namespace is None:
            raise _StatementError(tok, ErrorKind.UNDEFINED_PREFIX,
                                  f"prefix '{label}:' is not declared")
        value = namespace + local
        if not is_valid_iri(value):
            raise _StatementError(tok, ErrorKind.BAD_IRI, f"not a valid IRI: <{value}>")
        return value


def parse(source_text: str, origin: str = "<string>") -> Graph:
    """Parse Turtle text into a :class:`Graph`.

    Raises:
        TurtleSyntaxError: carrying every :class:`ParseError` found.
    """
    parser = _Parser(tokenize(source_text), origin)
    parser.parse()
    if parser.errors:
        raise TurtleSyntaxError(parser.errors)
    return Graph(
        frozenset(parser.triples),
        PrefixMap(parser.prefixes.items()),
        origin,
        parser.triples,
    )


# ---------------------------------------------------------------------------
# Canonical serializer

_LOCAL_OK_RE = re.compile(r"(?:\w(?:[\w.\-]*[\w\-])?)?\Z")
_INTEGER_RE = re.compile(r"[+-]?[0-9]+\Z")
_DECIMAL_RE = re.compile(r"[+-]?[0-9]*\.[0-9]+\Z")
_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t",
                   "\b": "\\b", "\f": "\\f"}
_NEEDS_ESCAPE_RE = re.compile(r'[\\"\x00-\x1f\x7f]')


def _escape_string(value: str) -> str:
    def repl(m: re.Match[str]) -> str:
        ch = m.group()
        return _STRING_ESCAPES.get(ch) or f"\\u{ord(ch):04X}"

    return _NEEDS_ESCAPE_RE.sub(repl, value)


class _TermWriter:
    def __init__(self, prefixes: PrefixMap) -> None:
        # longest namespace first, then label, so the choice is deterministic
        self.candidates = sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        self.cache: dict[str, str] = {}

    def iri(self, value: str) -> str:
        cached = self.cache.get(value)
        if cached is not None:
            return cached
        text = None
        for label, namespace in self.candidates:
            if value.startswith(namespace):
                local = value[len(namespace):]
                if _LOCAL_OK_RE.match(local):
                    text = f"{label}:{local}"
                    break
        if text is None:
            text = "<" + "".join(
                f"\\u{ord(c):04X}" if c in '<>"{}|^`\\' or ord(c) <= 0x20 else c for c in value
            ) + ">"
        self.cache[value] = text
        return text

    def term(self, term: Term) -> str:
        if isinstance(term, Iri):
            return self.iri(term.value)
        if isinstance(term, BlankNode):
            return f"_:{term.label}"
        lex = term.lexical
        if term.language:
            return f'"{_escape_string(lex)}"@{term.language}'
        dt = term.datatype
        if dt is None:
            return f'"{_escape_string(lex)}"'
        if (dt == XSD_INTEGER and _INTEGER_RE.match(lex)) or \
                (dt == XSD_DECIMAL and _DECIMAL_RE.match(lex)) or \
                (dt == XSD_BOOLEAN and lex in ("true", "false")):
            return lex
        return f'"{_escape_string(lex)}"^^{self.iri(dt)}'


def _predicate_key(predicate: Iri) -> tuple[int, str]:
    return (0 if predicate.value == RDF_TYPE else 1, predicate.value)


def canonical_order(graph: Graph) -> list[Triple]:
    """Triples in canonical order: subject, then rdf:type-first predicate, then object."""
    return sorted(
        graph.triples,
        key=lambda t: (t.subject.sort_key(), _predicate_key(t.predicate), t.object.sort_key()),
    )


def serialize_canonical(graph: Graph) -> str:
    """Deterministic, subject-grouped Turtle with one triple per line."""
    if not graph.triples:
        return ""
    writer = _TermWriter(graph.prefixes)
    out: list[str] = []
    for label in sorted(graph.prefixes):
        out.append(f"@prefix {label}: <{graph.prefixes[label]}> .\n")
    if out:
        out.append("\n")
    ordered = canonical_order(graph)
    for i, triple in enumerate(ordered):
        first = i == 0 or ordered[i - 1].subject != triple.subject
        last = i == len(ordered) - 1 or ordered[i + 1].subject != triple.subject
        if first:
            if i:
                out.append("\n")
            out.append(writer.term(triple.subject) + "\n")
        out.append(
            f"  {writer.term(triple.predicate)} {writer.term(triple.object)} {'.' if last else ';'}\n"
        )
    return "".join(out)


class CanonicalCheck(NamedTuple):
    canonical: bool
    line: Optional[int]
    """First line (1-based) where the text departs from canonical form."""


def first_divergence(actual: str, expected: str) -> Optional[int]:
    a = actual.splitlines(keepends=True)
    b = expected.splitlines(keepends=True)
    for i, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return i
    if len(a) != len(b):
        return min(len(a), len(b)) + 1
    return None


def is_canonical(source_text: str, origin: str = "<string>") -> CanonicalCheck:
    """Compare text with its own canonical form; raises TurtleSyntaxError if unparseable."""
    expected = serialize_canonical(parse(source_text, origin))
    line = first_divergence(source_text, expected)
    return CanonicalCheck(line is None, line)
