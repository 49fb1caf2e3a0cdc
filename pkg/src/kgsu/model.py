"""RDF terms, triples, quads, and the indexed in-memory dataset."""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Union

from kgsu.namespaces import RDF_LANGSTRING, XSD_STRING
from kgsu.store import new_quad_index


class InvalidTerm(ValueError):
    """A term violates one of its structural invariants."""


def _iri_is_absolute(value: str) -> bool:
    # Absolute means a scheme separator ':' occurs before any '/', '?', '#'.
    for ch in value:
        if ch == ":":
            return True
        if ch in "/?#":
            return False
    return False


_IRI_FORBIDDEN = set(' <>"{}|^`\\')


class Iri:
    __slots__ = ("value", "_hash")

    def __init__(self, value: str):
        if not value or not _iri_is_absolute(value):
            raise InvalidTerm(f"IRI is not absolute: {value!r}")
        if any(ch in _IRI_FORBIDDEN or ord(ch) < 0x21 for ch in value):
            raise InvalidTerm(f"IRI contains forbidden character: {value!r}")
        self.value = value
        self._hash = hash(("iri", value))

    def __eq__(self, other):
        return isinstance(other, Iri) and other.value == self.value

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Iri({self.value!r})"

    @property
    def local_name(self) -> str:
        """Substring after the last '#', '/' or ':' separator."""
        v = self.value
        for sep in "#/":
            idx = v.rfind(sep)
            if idx >= 0:
                return v[idx + 1 :]
        return v[v.rfind(":") + 1 :]


class BlankNode:
    __slots__ = ("label", "_hash")

    def __init__(self, label: str):
        if not label or any(ch.isspace() for ch in label):
            raise InvalidTerm(f"invalid blank node label: {label!r}")
        self.label = label
        self._hash = hash(("bnode", label))

    def __eq__(self, other):
        return isinstance(other, BlankNode) and other.label == self.label

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"BlankNode({self.label!r})"


class Literal:
    __slots__ = ("lexical", "datatype", "language", "_hash")

    def __init__(self, lexical: str, datatype: Optional[str] = None, language: Optional[str] = None):
        if language is not None:
            if datatype is not None and datatype != RDF_LANGSTRING:
                raise InvalidTerm("language-tagged literal must have rdf:langString datatype")
            datatype = RDF_LANGSTRING
        else:
            if datatype == RDF_LANGSTRING:
                raise InvalidTerm("rdf:langString literal requires a language tag")
            if datatype is None:
                datatype = XSD_STRING
        self.lexical = lexical
        self.datatype = datatype
        self.language = language
        self._hash = hash(("lit", lexical, datatype, language))

    def __eq__(self, other):
        return (
            isinstance(other, Literal)
            and other.lexical == self.lexical
            and other.datatype == self.datatype
            and other.language == self.language
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.language:
            return f"Literal({self.lexical!r}, lang={self.language!r})"
        return f"Literal({self.lexical!r}, datatype={self.datatype!r})"


Term = Union[Iri, BlankNode, Literal]
Subject = Union[Iri, BlankNode]


class _DefaultGraph:
    """Marker for the default graph; a real graph name, not an absence."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DEFAULT_GRAPH"

    def __hash__(self):
        return hash("##default##")

    def __eq__(self, other):
        return isinstance(other, _DefaultGraph)


DEFAULT_GRAPH = _DefaultGraph()

GraphName = Union[Iri, _DefaultGraph]


class Triple:
    __slots__ = ("subject", "predicate", "object", "_hash")

    def __init__(self, subject: Subject, predicate: Iri, object: Term):
        if not isinstance(subject, (Iri, BlankNode)):
            raise InvalidTerm(f"triple subject must be an IRI or blank node: {subject!r}")
        if not isinstance(predicate, Iri):
            raise InvalidTerm(f"triple predicate must be an IRI: {predicate!r}")
        if not isinstance(object, (Iri, BlankNode, Literal)):
            raise InvalidTerm(f"triple object must be a term: {object!r}")
        self.subject = subject
        self.predicate = predicate
        self.object = object
        self._hash = hash((subject, predicate, object))

    def __eq__(self, other):
        return (
            isinstance(other, Triple)
            and other.subject == self.subject
            and other.predicate == self.predicate
            and other.object == self.object
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Triple({self.subject!r}, {self.predicate!r}, {self.object!r})"


class Quad:
    __slots__ = ("subject", "predicate", "object", "graph", "_hash")

    def __init__(self, subject: Subject, predicate: Iri, object: Term, graph: GraphName = DEFAULT_GRAPH):
        if not isinstance(subject, (Iri, BlankNode)):
            raise InvalidTerm(f"quad subject must be an IRI or blank node: {subject!r}")
        if not isinstance(predicate, Iri):
            raise InvalidTerm(f"quad predicate must be an IRI: {predicate!r}")
        if not isinstance(object, (Iri, BlankNode, Literal)):
            raise InvalidTerm(f"quad object must be a term: {object!r}")
        if not isinstance(graph, (Iri, _DefaultGraph)):
            raise InvalidTerm(f"graph name must be an IRI or the default graph: {graph!r}")
        self.subject = subject
        self.predicate = predicate
        self.object = object
        self.graph = graph
        self._hash = hash((subject, predicate, object, graph))

    @property
    def triple(self) -> Triple:
        return Triple(self.subject, self.predicate, self.object)

    def __eq__(self, other):
        return (
            isinstance(other, Quad)
            and other.subject == self.subject
            and other.predicate == self.predicate
            and other.object == self.object
            and other.graph == self.graph
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Quad({self.subject!r}, {self.predicate!r}, {self.object!r}, {self.graph!r})"


def term_sort_key(term):
    """Total order over terms: IRIs < blank nodes < literals, then lexically."""
    if isinstance(term, Iri):
        return (0, term.value, "", "")
    if isinstance(term, BlankNode):
        return (1, term.label, "", "")
    if isinstance(term, Literal):
        return (2, term.lexical, term.datatype or "", term.language or "")
    if isinstance(term, _DefaultGraph):
        return (-1, "", "", "")
    raise TypeError(f"not a term: {term!r}")


class Dataset:
    """A set of quads with four index orderings (GSPO, SPOG, POSG, OSPG).

    Terms are interned to integer ids; the index core only sees ids, which
    keeps the hot insert/match path cheap and lets a compiled backend be
    swapped in. Concurrency: any number of readers, or one writer; callers
    that interleave must snapshot via :meth:`copy`.
    """

    def __init__(self, quads: Optional[Iterable[Quad]] = None, backend: Optional[str] = None):
        self._index = new_quad_index(backend)
        self._term_ids: dict = {}
        self._terms: list = []
        if quads is not None:
            for q in quads:
                self.add(q)

    def _intern(self, term) -> int:
        tid = self._term_ids.get(term)
        if tid is None:
            tid = len(self._terms)
            self._term_ids[term] = tid
            self._terms.append(term)
        return tid

    def _lookup(self, term) -> int:
        """Id of an already-interned term, or -2 when the term is unknown."""
        return self._term_ids.get(term, -2)

    def add(self, quad: Quad) -> bool:
        """Insert a quad; returns False when it was already present."""
        s = self._intern(quad.subject)
        p = self._intern(quad.predicate)
        o = self._intern(quad.object)
        g = self._intern(quad.graph)
        return self._index.insert(s, p, o, g)

    def remove(self, quad: Quad) -> bool:
        """Remove a quad; removing an absent quad is a no-op."""
        ids = []
        for term in (quad.subject, quad.predicate, quad.object, quad.graph):
            tid = self._lookup(term)
            if tid < 0:
                return False
            ids.append(tid)
        return self._index.remove(*ids)

    def __contains__(self, quad: Quad) -> bool:
        ids = []
        for term in (quad.subject, quad.predicate, quad.object, quad.graph):
            tid = self._lookup(term)
            if tid < 0:
                return False
            ids.append(tid)
        return self._index.contains(*ids)

    def __len__(self) -> int:
        return self._index.count()

    def count(self) -> int:
        return self._index.count()

    def match(self, subject=None, predicate=None, object=None, graph=None) -> Iterator[Quad]:
        """Stream quads matching the bound positions; None is a wildcard.

        Picks the index whose prefix covers the most bound positions and
        post-filters the rest, so any pattern shape is supported.
        """
        ids = []
        for term in (subject, predicate, object, graph):
            if term is None:
                ids.append(-1)
            else:
                tid = self._lookup(term)
                if tid < 0:
                    return
                ids.append(tid)
        terms = self._terms
        for s, p, o, g in self._index.match(*ids):
            yield Quad(terms[s], terms[p], terms[o], terms[g])

    def __iter__(self) -> Iterator[Quad]:
        return self.match()

    def graphs(self) -> set:
        """Every graph name with at least one quad (default included if non-empty)."""
        return {self._terms[g] for g in self._index.graph_ids()}

    def named_graphs(self) -> list:
        """Named (non-default) graph names, sorted by IRI."""
        named = [g for g in self.graphs() if isinstance(g, Iri)]
        named.sort(key=lambda g: g.value)
        return named

    def copy(self) -> "Dataset":
        """Independent snapshot sharing no mutable index state."""
        clone = Dataset.__new__(Dataset)
        clone._index = self._index.copy()
        clone._term_ids = dict(self._term_ids)
        clone._terms = list(self._terms)
        return clone

    @property
    def backend_name(self) -> str:
        return type(self._index).__module__.rsplit(".", 1)[-1].lstrip("_")
