"""Semantic units: GUPRI-identified named subgraphs over the dataset.

A unit's IRI doubles as the name of the graph holding its triples. Each
unit graph carries the unit's class typing, exactly one subject
declaration, the data triples, and (for compound units) association
edges from the subject resource to member unit IRIs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional

from kgsu.model import DEFAULT_GRAPH, BlankNode, Dataset, Iri, Literal, Quad, Triple
from kgsu.namespaces import RDF_TYPE, RDFS_LABEL

BASE_NS = "http://example.com/base/"
SEMUNIT_NS = "http://example.com/base/semanticunits/"
PROP_SUBJECT = BASE_NS + "semanticUnitSubject"
PROP_ASSOC = SEMUNIT_NS + "hasAssociatedSemanticUnit"

CLASS_IDENTIFICATION_UNIT = SEMUNIT_NS + "namedindividualidentificationunit"
CLASS_STATEMENT_UNIT = SEMUNIT_NS + "statementUnit"
CLASS_COMPOUND_UNIT = SEMUNIT_NS + "compoundUnit"


class InvalidLocalPart(ValueError):
    pass


class InvariantViolation(ValueError):
    pass


_LOCAL_FORBIDDEN = set('<>"{}|^`\\/?#')


def mint_unit_iri(kind_segment: str, subject_local: str) -> Iri:
    """Deterministic unit IRI: {base}semunit/{kind_segment}/{subject_local}."""
    for part in (kind_segment, subject_local):
        if not part:
            raise InvalidLocalPart("empty segment")
        if any(ch.isspace() or ch in _LOCAL_FORBIDDEN for ch in part):
            raise InvalidLocalPart(f"illegal character in {part!r}")
    return Iri(f"{BASE_NS}semunit/{kind_segment}/{subject_local}")


@dataclass
class SemanticUnit:
    iri: Iri
    kinds: list  # unit class IRIs, at least one
    subject: Iri
    data_triples: list = field(default_factory=list)  # list of Triple
    associations: list = field(default_factory=list)  # member unit IRIs


def materialize(unit: SemanticUnit, dataset: Dataset) -> Dataset:
    """Write a unit into its own named graph; returns the mutated dataset."""
    if not unit.kinds:
        raise InvariantViolation(f"unit {unit.iri.value} has no unit classes")
    if not isinstance(unit.subject, Iri):
        raise InvariantViolation(f"unit {unit.iri.value} has no subject")
    graph = unit.iri
    for kind in unit.kinds:
        dataset.add(Quad(unit.iri, Iri(RDF_TYPE), kind, graph))
    dataset.add(Quad(unit.iri, Iri(PROP_SUBJECT), unit.subject, graph))
    for triple in unit.data_triples:
        dataset.add(Quad(triple.subject, triple.predicate, triple.object, graph))
    for member in unit.associations:
        dataset.add(Quad(unit.subject, Iri(PROP_ASSOC), member, graph))
    return dataset


def extract(dataset: Dataset, unit_iri: Iri) -> set:
    """All quads in the unit's graph (empty for unknown IRIs)."""
    return set(dataset.match(graph=unit_iri))


def remove_unit(dataset: Dataset, unit_iri: Iri) -> int:
    """Drop the unit's graph; units are immutable, updates re-materialize."""
    quads = list(dataset.match(graph=unit_iri))
    for quad in quads:
        dataset.remove(quad)
    return len(quads)


def associations(dataset: Dataset, compound_iri: Iri) -> list:
    """Member unit IRIs associated inside the compound's graph, sorted."""
    members = {
        quad.object
        for quad in dataset.match(predicate=Iri(PROP_ASSOC), graph=compound_iri)
        if isinstance(quad.object, Iri)
    }
    return sorted(members, key=lambda iri: iri.value)


def units_for_subject(dataset: Dataset, resource: Iri) -> dict:
    """Units about a resource.

    direct: units whose subject declaration targets the resource.
    parents: units whose graph reaches a direct unit over one or more
    association edges (an edge runs from the graph holding the
    association quad to the member unit it names).
    """
    direct = {
        quad.subject
        for quad in dataset.match(predicate=Iri(PROP_SUBJECT), object=resource)
        if isinstance(quad.subject, Iri)
    }
    reverse_edges: dict = {}
    for quad in dataset.match(predicate=Iri(PROP_ASSOC)):
        if isinstance(quad.graph, Iri) and isinstance(quad.object, Iri):
            reverse_edges.setdefault(quad.object, set()).add(quad.graph)
    parents: set = set()
    stack = list(direct)
    while stack:
        node = stack.pop()
        for parent in reverse_edges.get(node, ()):
            if parent not in parents:
                parents.add(parent)
                stack.append(parent)
    return {
        "direct": sorted(direct, key=lambda iri: iri.value),
        "parents": sorted(parents, key=lambda iri: iri.value),
    }


def construct_view(dataset: Dataset, unit_iri: Iri) -> set:
    """The unit's triples with the graph component stripped."""
    return {quad.triple for quad in dataset.match(graph=unit_iri)}


def unit_detail(dataset: Dataset, unit_iri: Iri) -> Optional[dict]:
    """Unit summary as plain data, or None when the graph is empty."""
    quads = extract(dataset, unit_iri)
    if not quads:
        return None
    types = sorted(
        q.object.value for q in quads if q.subject == unit_iri and q.predicate.value == RDF_TYPE
    )
    subjects = [q.object for q in quads if q.subject == unit_iri and q.predicate.value == PROP_SUBJECT]
    assoc = sorted(q.object.value for q in quads if q.predicate.value == PROP_ASSOC)
    triples = sorted(
        (
            _term_value(q.subject),
            q.predicate.value,
            _term_value(q.object),
        )
        for q in quads
    )
    return {
        "iri": unit_iri.value,
        "types": types,
        "subject": subjects[0].value if subjects else None,
        "associations": assoc,
        "triples": [list(t) for t in triples],
    }


def _term_value(term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return "_:" + term.label
    return term.lexical


# visualization -------------------------------------------------------


@dataclass
class VisGraph:
    nodes: list  # {"id": str, "label": str, "kind": "resource"|"literal"}
    edges: list  # {"source": str, "predicate": str, "target": str, "label": str}

    def to_dict(self) -> dict:
        return {"nodes": self.nodes, "edges": self.edges}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def _literal_key(literal: Literal) -> str:
    payload = "\x1f".join((literal.lexical, literal.datatype or "", literal.language or ""))
    return "lit:" + hashlib.sha1(payload.encode("utf-8")).hexdigest()[:16]


def _english_label(dataset: Dataset, resource) -> Optional[str]:
    for quad in dataset.match(subject=resource, predicate=Iri(RDFS_LABEL)):
        obj = quad.object
        if isinstance(obj, Literal) and obj.language and obj.language.lower().startswith("en"):
            return obj.lexical
    return None


def _node_label(dataset: Dataset, term) -> str:
    if isinstance(term, Literal):
        return term.lexical
    label = _english_label(dataset, term)
    if label is not None:
        return label
    if isinstance(term, Iri):
        return term.local_name
    return "_:" + term.label


def vis_graph(dataset: Dataset, unit_iri: Iri) -> VisGraph:
    """Nodes and labeled edges for the unit's triples.

    Resource labels come from English rdfs:label triples anywhere in the
    dataset, falling back to the IRI local name; literals become leaf
    nodes keyed by a stable content hash.
    """
    triples = construct_view(dataset, unit_iri)
    nodes: dict = {}
    edges = []

    def node_id(term) -> str:
        if isinstance(term, Literal):
            key = _literal_key(term)
        elif isinstance(term, Iri):
            key = term.value
        else:
            key = "_:" + term.label
        if key not in nodes:
            kind = "literal" if isinstance(term, Literal) else "resource"
            nodes[key] = {"id": key, "label": _node_label(dataset, term), "kind": kind}
        return key

    for triple in sorted(
        triples,
        key=lambda t: (_term_value(t.subject), t.predicate.value, _term_value(t.object)),
    ):
        source = node_id(triple.subject)
        target = node_id(triple.object)
        edges.append(
            {
                "source": source,
                "predicate": triple.predicate.value,
                "target": target,
                "label": _node_label(dataset, triple.predicate),
            }
        )
    return VisGraph(nodes=list(nodes.values()), edges=edges)
