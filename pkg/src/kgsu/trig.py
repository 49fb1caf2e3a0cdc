"""Turtle and TriG parsing and serialization.

Supports the directives and shorthand the engine's inputs use: @prefix /
PREFIX, @base / BASE, the `a` keyword, predicate lists `;`, object lists
`,`, blank node property lists `[...]` and labels `_:x`, flat RDF
collections `(...)`, string literals (short and long form) with `@lang`
and `^^datatype`, numeric and boolean shorthand, and TriG graph blocks
`<g> { ... }` / `GRAPH <g> { ... }`. Graph blocks do not nest.

Canonical serialization emits full IRIs in a fixed sort order with
N-Quads-style escaping so identical datasets always produce identical
bytes; it refuses blank nodes.
"""

from __future__ import annotations

import re
from typing import Optional
from urllib.parse import urljoin

from kgsu.model import DEFAULT_GRAPH, BlankNode, Dataset, Iri, Literal, Quad
from kgsu.namespaces import (
    RDF_FIRST,
    RDF_LANGSTRING,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, snippet: str = ""):
        self.line = line
        self.column = column
        self.message = message
        self.snippet = snippet
        super().__init__(f"line {line}, column {column}: {message}")


class NestedGraph(ParseError):
    pass


class BlankNodeInCanonical(ValueError):
    """Canonical serialization met a blank node."""


class PrefixTable:
    """Prefix label to namespace IRI associations."""

    def __init__(self, bindings: Optional[dict] = None):
        self._by_label: dict = {}
        if bindings:
            for label, ns in bindings.items():
                self.bind(label, ns)

    def bind(self, label: str, namespace: str):
        Iri(namespace)  # namespaces must be absolute IRIs
        self._by_label[label] = namespace

    def expand(self, label: str, local: str) -> str:
        if label not in self._by_label:
            raise KeyError(f"undeclared prefix: {label}:")
        return self._by_label[label] + local

    def namespace(self, label: str) -> Optional[str]:
        return self._by_label.get(label)

    def shrink(self, iri: str) -> Optional[str]:
        """Compact an IRI to `label:local` when a declared namespace covers it."""
        best = None
        for label, ns in self._by_label.items():
            if iri.startswith(ns) and (best is None or len(ns) > len(self._by_label[best])):
                local = iri[len(ns) :]
                if _PN_LOCAL_SAFE.fullmatch(local):
                    best = label
        if best is None:
            return None
        return f"{best}:{iri[len(self._by_label[best]):]}"

    def items(self):
        return self._by_label.items()

    def __contains__(self, label):
        return label in self._by_label

    def __len__(self):
        return len(self._by_label)

    def copy(self) -> "PrefixTable":
        return PrefixTable(dict(self._by_label))


_PN_LOCAL_SAFE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-]*")

# Token kinds
IRIREF = "IRIREF"
PNAME = "PNAME"
BNODE_LABEL = "BNODE"
STRING = "STRING"
LANGTAG = "LANGTAG"
NUMBER = "NUMBER"
PUNCT = "PUNCT"
KEYWORD = "KEYWORD"
EOF = "EOF"

_KEYWORDS = {"a", "true", "false", "prefix", "base", "graph"}

# a trailing bare '.' is a statement terminator, not part of the number
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+(?:[eE][+-]?\d+)?|\d+)")
_PN_LOCAL_RE = re.compile(r"(?:[A-Za-z0-9_\-%\\:]|\.(?=[A-Za-z0-9_\-%\\:.]))*")
_PN_PREFIX_RE = re.compile(r"[A-Za-z][A-Za-z0-9_\-.]*")
_LANGTAG_RE = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")

_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class Token:
    __slots__ = ("kind", "value", "line", "column", "extra")

    def __init__(self, kind, value, line, column, extra=None):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column
        self.extra = extra

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.column})"


class Tokenizer:
    """Shared lexer for Turtle/TriG; positions are 1-based scalar counts."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def error(self, message: str, line=None, column=None) -> ParseError:
        line = line if line is not None else self.line
        column = column if column is not None else self.column
        lines = self.text.splitlines()
        snippet = lines[line - 1] if 0 < line <= len(lines) else ""
        return ParseError(line, column, message, snippet)

    def _advance(self, n: int = 1):
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.column = 1
                else:
                    self.column += 1
                self.pos += 1

    def _skip_ws_and_comments(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next_token(self) -> Token:
        self._skip_ws_and_comments()
        if self.pos >= len(self.text):
            return Token(EOF, "", self.line, self.column)
        line, column = self.line, self.column
        ch = self.text[self.pos]

        if ch == "<":
            return self._iriref(line, column)
        if ch in "\"'":
            return self._string(line, column)
        if ch == "_" and self.text[self.pos : self.pos + 2] == "_:":
            return self._bnode_label(line, column)
        if ch == "@":
            return self._at_word(line, column)
        if ch in ".;,[](){}^+$?":
            return self._punct(line, column)
        if ch.isdigit() or (ch in "+-" and self._peek_is_number()):
            return self._number(line, column)
        return self._name_or_keyword(line, column)

    def _peek_is_number(self):
        nxt = self.text[self.pos + 1 : self.pos + 2]
        return nxt.isdigit() or nxt == "."

    def _iriref(self, line, column) -> Token:
        self._advance()  # <
        out = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated IRI", line, column)
            ch = self.text[self.pos]
            if ch == ">":
                self._advance()
                return Token(IRIREF, "".join(out), line, column)
            if ch == "\\":
                out.append(self._unicode_escape(allow_echar=False))
                continue
            if ch in ' <"{}|^`' or ord(ch) <= 0x20:
                raise self.error(f"invalid character {ch!r} in IRI")
            out.append(ch)
            self._advance()

    def _unicode_escape(self, allow_echar: bool) -> str:
        start_line, start_col = self.line, self.column
        self._advance()  # backslash
        if self.pos >= len(self.text):
            raise self.error("dangling escape", start_line, start_col)
        ch = self.text[self.pos]
        if ch == "u" or ch == "U":
            width = 4 if ch == "u" else 8
            self._advance()
            digits = self.text[self.pos : self.pos + width]
            if len(digits) < width or not all(c in "0123456789abcdefABCDEF" for c in digits):
                raise self.error("malformed unicode escape", start_line, start_col)
            self._advance(width)
            return chr(int(digits, 16))
        if allow_echar and ch in _STRING_ESCAPES:
            self._advance()
            return _STRING_ESCAPES[ch]
        raise self.error(f"unknown escape \\{ch}", start_line, start_col)

    def _string(self, line, column) -> Token:
        quote = self.text[self.pos]
        long_form = self.text[self.pos : self.pos + 3] == quote * 3
        self._advance(3 if long_form else 1)
        out = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated string", line, column)
            ch = self.text[self.pos]
            if long_form:
                if self.text[self.pos : self.pos + 3] == quote * 3:
                    self._advance(3)
                    return Token(STRING, "".join(out), line, column)
            elif ch == quote:
                self._advance()
                return Token(STRING, "".join(out), line, column)
            elif ch == "\n":
                raise self.error("newline in single-line string", line, column)
            if ch == "\\":
                out.append(self._unicode_escape(allow_echar=True))
            else:
                out.append(ch)
                self._advance()

    def _bnode_label(self, line, column) -> Token:
        self._advance(2)  # _:
        match = _PN_LOCAL_RE.match(self.text, self.pos)
        label = match.group(0) if match else ""
        if not label:
            raise self.error("empty blank node label", line, column)
        self._advance(len(label))
        return Token(BNODE_LABEL, label, line, column)

    def _at_word(self, line, column) -> Token:
        self._advance()  # @
        match = _LANGTAG_RE.match(self.text, self.pos)
        if not match:
            raise self.error("malformed @-word", line, column)
        word = match.group(0)
        self._advance(len(word))
        if word.lower() in ("prefix", "base"):
            return Token(KEYWORD, "@" + word.lower(), line, column)
        return Token(LANGTAG, word, line, column)

    def _punct(self, line, column) -> Token:
        ch = self.text[self.pos]
        if ch == "^" and self.text[self.pos : self.pos + 2] == "^^":
            self._advance(2)
            return Token(PUNCT, "^^", line, column)
        self._advance()
        return Token(PUNCT, ch, line, column)

    def _number(self, line, column) -> Token:
        match = _NUMBER_RE.match(self.text, self.pos)
        if not match:
            raise self.error("malformed number", line, column)
        lexical = match.group(0)
        self._advance(len(lexical))
        if "e" in lexical.lower():
            datatype = XSD_DOUBLE
        elif "." in lexical:
            datatype = XSD_DECIMAL
        else:
            datatype = XSD_INTEGER
        return Token(NUMBER, lexical, line, column, extra=datatype)

    def _name_or_keyword(self, line, column) -> Token:
        # prefixed name (maybe empty prefix) or bare keyword
        text, pos = self.text, self.pos
        match = _PN_PREFIX_RE.match(text, pos)
        word = match.group(0) if match else ""
        after = pos + len(word)
        if after < len(text) and text[after] == ":":
            self._advance(len(word) + 1)
            local_match = _PN_LOCAL_RE.match(self.text, self.pos)
            local = local_match.group(0) if local_match else ""
            self._advance(len(local))
            return Token(PNAME, word, line, column, extra=local)
        if word and word.lower() in _KEYWORDS:
            self._advance(len(word))
            return Token(KEYWORD, word, line, column)
        if not word:
            raise self.error(f"unexpected character {text[pos]!r}")
        raise self.error(f"unexpected token {word!r}")


class _TrigParser:
    def __init__(self, text: str, allow_graphs: bool):
        self.tokenizer = Tokenizer(text)
        self.allow_graphs = allow_graphs
        self.prefixes = PrefixTable()
        self.base: Optional[str] = None
        self.quads: list = []
        self.current_graph = DEFAULT_GRAPH
        self.in_graph_block = False
        self._bnode_counter = 0
        self.token = self.tokenizer.next_token()

    # token helpers -------------------------------------------------

    def _next(self):
        self.token = self.tokenizer.next_token()

    def _expect_punct(self, value: str):
        if self.token.kind != PUNCT or self.token.value != value:
            raise self._err(f"expected {value!r}, found {self.token.value!r}")
        self._next()

    def _err(self, message: str) -> ParseError:
        return self.tokenizer.error(message, self.token.line, self.token.column)

    def _fresh_bnode(self) -> BlankNode:
        self._bnode_counter += 1
        return BlankNode(f"g{self._bnode_counter}")

    def _resolve_iri(self, value: str) -> Iri:
        for ch in value:
            if ch == ":":
                break
            if ch in "/?#":
                value = None if self.base is None else urljoin(self.base, value)
                break
        else:
            value = None if self.base is None else urljoin(self.base, value)
        if value is None:
            raise self._err("relative IRI without @base")
        try:
            return Iri(value)
        except ValueError as exc:
            raise self._err(str(exc))

    # grammar -------------------------------------------------------

    def parse(self):
        while self.token.kind != EOF:
            if self.token.kind == KEYWORD and self.token.value.lower() in ("@prefix", "@base", "prefix", "base"):
                self._directive()
            else:
                self._block_or_triples()
        return self.quads, self.prefixes

    def _directive(self):
        word = self.token.value.lower()
        sparql_style = not word.startswith("@")
        self._next()
        if word.endswith("base"):
            if self.token.kind != IRIREF:
                raise self._err("expected IRI after base directive")
            self.base = self.token.value if self.base is None else urljoin(self.base, self.token.value)
            self._next()
        else:
            if self.token.kind != PNAME or self.token.extra:
                raise self._err("expected prefix label after prefix directive")
            label = self.token.value
            self._next()
            if self.token.kind != IRIREF:
                raise self._err("expected namespace IRI in prefix directive")
            namespace = self._resolve_iri(self.token.value).value
            self.prefixes.bind(label, namespace)
            self._next()
        if not sparql_style:
            self._expect_punct(".")

    def _block_or_triples(self):
        if self.token.kind == KEYWORD and self.token.value.lower() == "graph":
            if not self.allow_graphs:
                raise self._err("graph blocks are not allowed in Turtle")
            self._next()
            name = self._read_graph_name()
            self._graph_block(name)
            return
        if self.token.kind in (IRIREF, PNAME):
            # lookahead: `<iri> {` opens a graph block in TriG
            saved = (self.token, self.tokenizer.pos, self.tokenizer.line, self.tokenizer.column)
            name = self._read_graph_name()
            if self.token.kind == PUNCT and self.token.value == "{":
                if not self.allow_graphs:
                    raise self._err("graph blocks are not allowed in Turtle")
                self._graph_block(name)
                return
            self.token, self.tokenizer.pos, self.tokenizer.line, self.tokenizer.column = saved
        self._triples()
        self._expect_punct(".")

    def _read_graph_name(self) -> Iri:
        if self.token.kind == IRIREF:
            name = self._resolve_iri(self.token.value)
        elif self.token.kind == PNAME:
            try:
                name = Iri(self.prefixes.expand(self.token.value, self.token.extra or ""))
            except KeyError as exc:
                raise self._err(str(exc))
        else:
            raise self._err("expected graph name")
        self._next()
        return name

    def _graph_block(self, name: Iri):
        if self.in_graph_block:
            raise NestedGraph(self.token.line, self.token.column, "graph blocks cannot nest")
        self._expect_punct("{")
        self.in_graph_block = True
        self.current_graph = name
        while not (self.token.kind == PUNCT and self.token.value == "}"):
            if self.token.kind == EOF:
                raise self._err("unclosed graph block")
            self._triples()
            if self.token.kind == PUNCT and self.token.value == ".":
                self._next()
            elif not (self.token.kind == PUNCT and self.token.value == "}"):
                raise self._err("expected '.' or '}' after triples")
        self._next()
        self.in_graph_block = False
        self.current_graph = DEFAULT_GRAPH

    def _triples(self):
        if self.token.kind == PUNCT and self.token.value == "[":
            subject = self._bnode_property_list()
            if not (self.token.kind == PUNCT and self.token.value in ".}"):
                self._predicate_object_list(subject)
            return
        subject = self._subject()
        self._predicate_object_list(subject)

    def _subject(self):
        tok = self.token
        if tok.kind == IRIREF:
            self._next()
            return self._resolve_iri(tok.value)
        if tok.kind == PNAME:
            self._next()
            try:
                return Iri(self.prefixes.expand(tok.value, tok.extra or ""))
            except KeyError as exc:
                raise self._err(str(exc))
        if tok.kind == BNODE_LABEL:
            self._next()
            return BlankNode("u" + tok.value)
        if tok.kind == PUNCT and tok.value == "(":
            return self._collection()
        raise self._err(f"expected subject, found {tok.value!r}")

    def _predicate(self) -> Iri:
        tok = self.token
        if tok.kind == KEYWORD and tok.value == "a":
            self._next()
            return Iri(RDF_TYPE)
        if tok.kind == IRIREF:
            self._next()
            return self._resolve_iri(tok.value)
        if tok.kind == PNAME:
            self._next()
            try:
                return Iri(self.prefixes.expand(tok.value, tok.extra or ""))
            except KeyError as exc:
                raise self._err(str(exc))
        raise self._err(f"expected predicate, found {tok.value!r}")

    def _predicate_object_list(self, subject):
        while True:
            predicate = self._predicate()
            self._object_list(subject, predicate)
            if self.token.kind == PUNCT and self.token.value == ";":
                self._next()
                # allow trailing ';' before '.' or '}'
                if self.token.kind == PUNCT and self.token.value in ".;}]":
                    while self.token.kind == PUNCT and self.token.value == ";":
                        self._next()
                    return
                continue
            return

    def _object_list(self, subject, predicate):
        while True:
            obj = self._object()
            self._emit(subject, predicate, obj)
            if self.token.kind == PUNCT and self.token.value == ",":
                self._next()
                continue
            return

    def _object(self):
        tok = self.token
        if tok.kind == IRIREF:
            self._next()
            return self._resolve_iri(tok.value)
        if tok.kind == PNAME:
            self._next()
            try:
                return Iri(self.prefixes.expand(tok.value, tok.extra or ""))
            except KeyError as exc:
                raise self._err(str(exc))
        if tok.kind == BNODE_LABEL:
            self._next()
            return BlankNode("u" + tok.value)
        if tok.kind == PUNCT and tok.value == "[":
            return self._bnode_property_list()
        if tok.kind == PUNCT and tok.value == "(":
            return self._collection()
        if tok.kind == STRING:
            return self._literal()
        if tok.kind == NUMBER:
            self._next()
            return Literal(tok.value, datatype=tok.extra)
        if tok.kind == KEYWORD and tok.value in ("true", "false"):
            self._next()
            return Literal(tok.value, datatype=XSD_BOOLEAN)
        raise self._err(f"expected object, found {tok.value!r}")

    def _literal(self) -> Literal:
        lexical = self.token.value
        self._next()
        if self.token.kind == LANGTAG:
            tag = self.token.value
            self._next()
            return Literal(lexical, language=tag)
        if self.token.kind == PUNCT and self.token.value == "^^":
            self._next()
            tok = self.token
            if tok.kind == IRIREF:
                self._next()
                datatype = self._resolve_iri(tok.value).value
            elif tok.kind == PNAME:
                self._next()
                try:
                    datatype = self.prefixes.expand(tok.value, tok.extra or "")
                except KeyError as exc:
                    raise self._err(str(exc))
            else:
                raise self._err("expected datatype IRI after ^^")
            if datatype == XSD_STRING:
                return Literal(lexical)
            if datatype == RDF_LANGSTRING:
                raise self._err("rdf:langString requires a language tag, not ^^")
            return Literal(lexical, datatype=datatype)
        return Literal(lexical)

    def _bnode_property_list(self) -> BlankNode:
        self._expect_punct("[")
        node = self._fresh_bnode()
        if not (self.token.kind == PUNCT and self.token.value == "]"):
            self._predicate_object_list(node)
        self._expect_punct("]")
        return node

    def _collection(self):
        self._expect_punct("(")
        items = []
        while not (self.token.kind == PUNCT and self.token.value == ")"):
            if self.token.kind == EOF:
                raise self._err("unclosed collection")
            items.append(self._object())
        self._next()
        if not items:
            return Iri(RDF_NIL)
        head = self._fresh_bnode()
        node = head
        for i, item in enumerate(items):
            self._emit(node, Iri(RDF_FIRST), item)
            if i + 1 < len(items):
                nxt = self._fresh_bnode()
                self._emit(node, Iri(RDF_REST), nxt)
                node = nxt
            else:
                self._emit(node, Iri(RDF_REST), Iri(RDF_NIL))
        return head

    def _emit(self, subject, predicate, obj):
        self.quads.append(Quad(subject, predicate, obj, self.current_graph))


def parse_turtle(text: str):
    """Parse Turtle; returns (quads in the default graph, PrefixTable)."""
    parser = _TrigParser(text, allow_graphs=False)
    return parser.parse()


def parse_trig(text: str, backend: Optional[str] = None):
    """Parse TriG; returns (Dataset, PrefixTable)."""
    parser = _TrigParser(text, allow_graphs=True)
    quads, prefixes = parser.parse()
    dataset = Dataset(backend=backend)
    for quad in quads:
        dataset.add(quad)
    return dataset, prefixes


# serialization ------------------------------------------------------


def _escape_literal(value: str) -> str:
    out = []
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _term_nq(term, canonical: bool) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        if canonical:
            raise BlankNodeInCanonical(f"blank node _:{term.label} in canonical serialization")
        return f"_:{term.label}"
    if isinstance(term, Literal):
        body = f'"{_escape_literal(term.lexical)}"'
        if term.language:
            return f"{body}@{term.language}"
        if term.datatype and term.datatype != XSD_STRING:
            return f"{body}^^<{term.datatype}>"
        return body
    raise TypeError(f"not a term: {term!r}")


def _term_compact(term, prefixes: PrefixTable) -> str:
    if isinstance(term, Iri):
        if term.value == RDF_TYPE:
            return "a"
        short = prefixes.shrink(term.value)
        return short if short else f"<{term.value}>"
    if isinstance(term, Literal) and term.datatype not in (XSD_STRING, RDF_LANGSTRING):
        body = f'"{_escape_literal(term.lexical)}"'
        short = prefixes.shrink(term.datatype)
        return f"{body}^^{short}" if short else f"{body}^^<{term.datatype}>"
    return _term_nq(term, canonical=False)


def _sort_key(term):
    from kgsu.model import term_sort_key

    return term_sort_key(term)


def serialize_trig(dataset: Dataset, prefixes: Optional[PrefixTable] = None, canonical: bool = False) -> str:
    """Serialize a dataset as TriG.

    Canonical mode sorts graphs by IRI (default graph first), then triples
    by subject, predicate, object in term order, uses full IRIs, and is
    byte-deterministic; it raises BlankNodeInCanonical on blank nodes.
    Non-canonical mode compacts with the given prefixes. Output re-parses
    to an equal dataset either way.
    """
    if canonical:
        return _serialize_canonical(dataset)
    return _serialize_pretty(dataset, prefixes or PrefixTable())


def _graph_sections(dataset: Dataset):
    by_graph: dict = {}
    for quad in dataset:
        by_graph.setdefault(quad.graph, []).append(quad)
    default = by_graph.pop(DEFAULT_GRAPH, [])
    named = sorted(by_graph.items(), key=lambda item: item[0].value)
    return default, named


def _serialize_canonical(dataset: Dataset) -> str:
    default, named = _graph_sections(dataset)
    lines = []

    def emit(quads, indent=""):
        rows = sorted(
            quads,
            key=lambda q: (_sort_key(q.subject), _sort_key(q.predicate), _sort_key(q.object)),
        )
        for quad in rows:
            s = _term_nq(quad.subject, canonical=True)
            p = _term_nq(quad.predicate, canonical=True)
            o = _term_nq(quad.object, canonical=True)
            lines.append(f"{indent}{s} {p} {o} .")

    emit(default)
    for graph, quads in named:
        lines.append(f"GRAPH <{graph.value}> {{")
        emit(quads, indent="  ")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")


def _serialize_pretty(dataset: Dataset, prefixes: PrefixTable) -> str:
    lines = []
    for label, ns in sorted(prefixes.items()):
        lines.append(f"@prefix {label}: <{ns}> .")
    if len(prefixes):
        lines.append("")

    def emit(quads, indent=""):
        by_subject: dict = {}
        for quad in quads:
            by_subject.setdefault(quad.subject, []).append(quad)
        for subject in sorted(by_subject, key=_sort_key):
            rows = sorted(by_subject[subject], key=lambda q: (_sort_key(q.predicate), _sort_key(q.object)))
            subj = _term_compact(subject, prefixes)
            parts = [
                f"{_term_compact(q.predicate, prefixes)} {_term_compact(q.object, prefixes)}" for q in rows
            ]
            joiner = f" ;\n{indent}{' ' * (len(subj) + 1)}"
            lines.append(f"{indent}{subj} {joiner.join(parts)} .")

    default, named = _graph_sections(dataset)
    emit(default)
    for graph, quads in named:
        name = _term_compact(graph, prefixes)
        lines.append(f"{name} {{")
        emit(quads, indent="  ")
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")
