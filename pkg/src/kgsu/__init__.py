"""Semantic-units knowledge graph engine.

An in-memory RDF quad store with named-graph indexes, Turtle/TriG
parsing and serialization, a SPARQL query subset, an R2RML-style
mapping processor for CSV tables, SHACL shape validation, and
embedding-based metadata enrichment.
"""

__version__ = "0.1.0"

from kgsu.model import (  # noqa: F401
    DEFAULT_GRAPH,
    BlankNode,
    Dataset,
    InvalidTerm,
    Iri,
    Literal,
    Quad,
    Triple,
)
