"""Tabular-to-RDF mapping engine over an R2RML subset.

Logical tables are CSV files (RFC 4180, UTF-8, header row required,
empty string meaning NULL). Supported mapping vocabulary: rr:TriplesMap,
rr:logicalTable / rr:tableName, rr:subjectMap (rr:template, rr:class,
rr:termType, rr:graphMap with rr:template), rr:predicateObjectMap
(rr:predicate, rr:objectMap with rr:constant / rr:template /
rr:parentTriplesMap plus rr:termType, rr:language, rr:datatype, and
rr:graphMap). Anything else in the rr: namespace is rejected.

Semantics:

- A NULL cell referenced by a subject or object template skips that
  triple (no error); a NULL in a graph template skips that graph target.
- The effective graphs of a triple are the union of the expanded
  subject-map and predicate-object-map graph templates; with no graph
  maps declared the triple goes to the default graph, and rr:class
  typing follows the subject-map graphs.
- Cell values substituted into IRI templates are percent-encoded
  (every byte outside unreserved characters); literal templates
  substitute verbatim. An expanded IRI of the form `label:rest` whose
  label is a declared prefix resolves against the mapping document's
  prefix table, which lets templates mint IRIs from CURIE-shaped text.
- rr:parentTriplesMap resolves to the parent map's subject IRI expanded
  on the same row; the parent must read the same logical table.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional
from urllib.parse import quote

from kgsu.model import DEFAULT_GRAPH, Dataset, Iri, Literal, Quad
from kgsu.namespaces import RDF_TYPE, RR_NS
from kgsu.trig import PrefixTable, parse_turtle


class MappingError(ValueError):
    pass


class UnsupportedR2RML(MappingError):
    def __init__(self, feature: str):
        self.feature = feature
        super().__init__(f"unsupported mapping feature: {feature}")


class MissingField(MappingError):
    pass


class NullCell(MappingError):
    pass


class UnknownColumn(MappingError):
    pass


class TableNotFound(MappingError):
    pass


class InvalidIri(MappingError):
    pass


@dataclass
class LogicalTable:
    name: str
    header: list
    rows: list  # list of string-cell lists, same arity as header

    def __post_init__(self):
        if len(set(self.header)) != len(self.header):
            raise MappingError(f"table {self.name!r} has duplicate column names")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.header):
                raise MappingError(f"table {self.name!r} row {i + 1} has wrong arity")

    def iter_dict_rows(self):
        for row in self.rows:
            yield dict(zip(self.header, row))


def load_csv(name: str, text: str) -> LogicalTable:
    reader = csv.reader(io.StringIO(text.lstrip("﻿")))
    rows = [row for row in reader if row]
    if not rows:
        raise MappingError(f"table {name!r} has no header row")
    return LogicalTable(name=name, header=rows[0], rows=rows[1:])


def load_tables_dir(path) -> dict:
    tables = {}
    for csv_path in sorted(Path(path).glob("*.csv")):
        tables[csv_path.stem] = load_csv(csv_path.stem, csv_path.read_text(encoding="utf-8"))
    return tables


# mapping document -----------------------------------------------------


@dataclass
class ConstantMap:
    term: object  # Iri or Literal


@dataclass
class TemplateMap:
    pattern: str
    term_type: str  # "iri" | "literal"
    language: Optional[str] = None
    datatype: Optional[str] = None


@dataclass
class ParentRefMap:
    target: str  # name of the parent triples map


@dataclass
class PredicateObjectMap:
    predicate: Iri
    object_map: object
    graph_templates: list = field(default_factory=list)


@dataclass
class SubjectMap:
    template: str
    classes: list = field(default_factory=list)
    graph_templates: list = field(default_factory=list)


@dataclass
class TriplesMapSpec:
    name: str
    table: str
    subject: SubjectMap
    poms: list = field(default_factory=list)


@dataclass
class MappingDocument:
    maps: list
    prefixes: PrefixTable


_RR = {
    "TriplesMap": Iri(RR_NS + "TriplesMap"),
    "logicalTable": Iri(RR_NS + "logicalTable"),
    "tableName": Iri(RR_NS + "tableName"),
    "subjectMap": Iri(RR_NS + "subjectMap"),
    "template": Iri(RR_NS + "template"),
    "class": Iri(RR_NS + "class"),
    "termType": Iri(RR_NS + "termType"),
    "graphMap": Iri(RR_NS + "graphMap"),
    "predicateObjectMap": Iri(RR_NS + "predicateObjectMap"),
    "predicate": Iri(RR_NS + "predicate"),
    "objectMap": Iri(RR_NS + "objectMap"),
    "constant": Iri(RR_NS + "constant"),
    "parentTriplesMap": Iri(RR_NS + "parentTriplesMap"),
    "language": Iri(RR_NS + "language"),
    "datatype": Iri(RR_NS + "datatype"),
    "IRI": Iri(RR_NS + "IRI"),
    "Literal": Iri(RR_NS + "Literal"),
}


def _map_name(iri: Iri) -> str:
    value = iri.value
    if "#" in value:
        return value.rsplit("#", 1)[1]
    return value.rsplit("/", 1)[-1]


class _DocIndex:
    def __init__(self, quads):
        self.by_subject: dict = {}
        self.order: list = []
        for quad in quads:
            if quad.subject not in self.by_subject:
                self.order.append(quad.subject)
            self.by_subject.setdefault(quad.subject, []).append((quad.predicate, quad.object))

    def pairs(self, node):
        return self.by_subject.get(node, [])

    def objects(self, node, predicate):
        return [o for p, o in self.pairs(node) if p == predicate]

    def one(self, node, predicate):
        values = self.objects(node, predicate)
        return values[0] if values else None

    def check_vocabulary(self, node, allowed):
        for p, _ in self.pairs(node):
            if p.value.startswith(RR_NS) and p not in allowed:
                raise UnsupportedR2RML(f"rr:{p.value[len(RR_NS):]}")


def _graph_templates(index: _DocIndex, node) -> list:
    templates = []
    for gm in index.objects(node, _RR["graphMap"]):
        index.check_vocabulary(gm, {_RR["template"]})
        template = index.one(gm, _RR["template"])
        if template is None or not isinstance(template, Literal):
            raise UnsupportedR2RML("rr:graphMap without rr:template (constants are not supported)")
        templates.append(template.lexical)
    return templates


def parse_mapping(turtle_text: str) -> MappingDocument:
    quads, prefixes = parse_turtle(turtle_text)
    index = _DocIndex(quads)
    rdf_type = Iri(RDF_TYPE)

    maps = []
    names = set()
    for node in index.order:
        if _RR["TriplesMap"] not in index.objects(node, rdf_type):
            continue
        if not isinstance(node, Iri):
            raise UnsupportedR2RML("anonymous triples maps")
        name = _map_name(node)
        if name in names:
            raise MappingError(f"duplicate triples map name: {name}")
        names.add(name)
        index.check_vocabulary(
            node, {_RR["logicalTable"], _RR["subjectMap"], _RR["predicateObjectMap"]}
        )

        table_node = index.one(node, _RR["logicalTable"])
        if table_node is None:
            raise MissingField(f"{name}: rr:logicalTable is required")
        index.check_vocabulary(table_node, {_RR["tableName"]})
        table_name = index.one(table_node, _RR["tableName"])
        if not isinstance(table_name, Literal):
            raise MissingField(f"{name}: rr:tableName is required")

        subject_node = index.one(node, _RR["subjectMap"])
        if subject_node is None:
            raise MissingField(f"{name}: rr:subjectMap is required")
        index.check_vocabulary(
            subject_node, {_RR["template"], _RR["class"], _RR["termType"], _RR["graphMap"]}
        )
        template = index.one(subject_node, _RR["template"])
        if not isinstance(template, Literal):
            raise MissingField(f"{name}: subject map needs rr:template")
        term_type = index.one(subject_node, _RR["termType"])
        if term_type is not None and term_type != _RR["IRI"]:
            raise UnsupportedR2RML(f"subject rr:termType {term_type!r}")
        classes = []
        for cls in index.objects(subject_node, _RR["class"]):
            if not isinstance(cls, Iri):
                raise MappingError(f"{name}: rr:class must be an IRI")
            classes.append(cls)
        subject = SubjectMap(
            template=template.lexical,
            classes=classes,
            graph_templates=_graph_templates(index, subject_node),
        )

        poms = []
        for pom_node in index.objects(node, _RR["predicateObjectMap"]):
            index.check_vocabulary(
                pom_node, {_RR["predicate"], _RR["objectMap"], _RR["graphMap"]}
            )
            predicate = index.one(pom_node, _RR["predicate"])
            if not isinstance(predicate, Iri):
                raise MissingField(f"{name}: predicate-object map needs rr:predicate")
            object_node = index.one(pom_node, _RR["objectMap"])
            if object_node is None:
                raise MissingField(f"{name}: predicate-object map needs rr:objectMap")
            index.check_vocabulary(
                object_node,
                {
                    _RR["constant"],
                    _RR["template"],
                    _RR["parentTriplesMap"],
                    _RR["termType"],
                    _RR["language"],
                    _RR["datatype"],
                },
            )
            object_map = _parse_object_map(index, object_node, name)
            poms.append(
                PredicateObjectMap(
                    predicate=predicate,
                    object_map=object_map,
                    graph_templates=_graph_templates(index, pom_node),
                )
            )
        maps.append(TriplesMapSpec(name=name, table=table_name.lexical, subject=subject, poms=poms))

    by_name = {m.name: m for m in maps}
    for tmap in maps:
        for pom in tmap.poms:
            if isinstance(pom.object_map, ParentRefMap):
                parent = by_name.get(pom.object_map.target)
                if parent is None:
                    raise MissingField(f"{tmap.name}: unknown parent triples map {pom.object_map.target!r}")
                if parent.table != tmap.table:
                    raise UnsupportedR2RML("rr:parentTriplesMap across different logical tables")
    return MappingDocument(maps=maps, prefixes=prefixes)


def _parse_object_map(index: _DocIndex, node, map_name: str):
    constant = index.one(node, _RR["constant"])
    template = index.one(node, _RR["template"])
    parent = index.one(node, _RR["parentTriplesMap"])
    present = [x for x in (constant, template, parent) if x is not None]
    if len(present) != 1:
        raise MissingField(
            f"{map_name}: object map needs exactly one of rr:constant / rr:template / rr:parentTriplesMap"
        )
    if constant is not None:
        if not isinstance(constant, (Iri, Literal)):
            raise UnsupportedR2RML("blank node constants")
        return ConstantMap(term=constant)
    if parent is not None:
        if not isinstance(parent, Iri):
            raise MissingField(f"{map_name}: rr:parentTriplesMap must reference a map")
        return ParentRefMap(target=_map_name(parent))

    term_type = index.one(node, _RR["termType"])
    language = index.one(node, _RR["language"])
    datatype = index.one(node, _RR["datatype"])
    if language is not None and datatype is not None:
        raise MappingError(f"{map_name}: rr:language and rr:datatype are mutually exclusive")
    if term_type == _RR["Literal"] or language is not None or datatype is not None:
        kind = "literal"
    elif term_type is None or term_type == _RR["IRI"]:
        kind = "iri"
    else:
        raise UnsupportedR2RML(f"rr:termType {term_type!r}")
    if kind == "iri" and (language is not None or datatype is not None):
        raise MappingError(f"{map_name}: language/datatype require a literal term map")
    return TemplateMap(
        pattern=template.lexical if isinstance(template, Literal) else str(template),
        term_type=kind,
        language=language.lexical if isinstance(language, Literal) else None,
        datatype=datatype.value if isinstance(datatype, Iri) else None,
    )


# template expansion ----------------------------------------------------

_PLACEHOLDER_RE = re.compile(r"\{([^{}]*)\}")


def expand_template(pattern: str, row: dict, iri_safe: bool) -> str:
    """Substitute `{column}` placeholders with row cells.

    IRI-safe mode percent-encodes every cell byte outside the unreserved
    set. Raises NullCell for empty cells and UnknownColumn for
    placeholders that name no column.
    """
    out = []
    last = 0
    for match in _PLACEHOLDER_RE.finditer(pattern):
        out.append(pattern[last : match.start()])
        column = match.group(1)
        if not column:
            raise MappingError(f"empty placeholder in template {pattern!r}")
        if column not in row:
            raise UnknownColumn(f"template references unknown column {column!r}")
        value = row[column]
        if value == "":
            raise NullCell(column)
        out.append(quote(value, safe="") if iri_safe else value)
        last = match.end()
    out.append(pattern[last:])
    return "".join(out)


def _expand_curie(value: str, prefixes: PrefixTable) -> str:
    idx = value.find(":")
    if idx <= 0:
        return value
    label, rest = value[:idx], value[idx + 1 :]
    namespace = prefixes.namespace(label)
    if namespace is None or rest.startswith("//"):
        return value
    return namespace + rest


def _expand_iri(pattern: str, row: dict, prefixes: PrefixTable) -> Iri:
    value = _expand_curie(expand_template(pattern, row, iri_safe=True), prefixes)
    try:
        return Iri(value)
    except ValueError as exc:
        raise InvalidIri(str(exc))


def execute(doc: MappingDocument, tables: dict, backend: Optional[str] = None) -> Dataset:
    """Run every triples map over its table; deterministic in (doc, tables)."""
    dataset = Dataset(backend=backend)
    by_name = {m.name: m for m in doc.maps}
    rdf_type = Iri(RDF_TYPE)

    for tmap in doc.maps:
        table = tables.get(tmap.table)
        if table is None:
            raise TableNotFound(f"{tmap.name}: no table named {tmap.table!r}")
        for row in table.iter_dict_rows():
            try:
                subject = _expand_iri(tmap.subject.template, row, doc.prefixes)
            except NullCell:
                continue
            subject_graphs = _expand_graphs(tmap.subject.graph_templates, row, doc.prefixes)
            for cls in tmap.subject.classes:
                _emit(dataset, subject, rdf_type, cls, subject_graphs, bool(tmap.subject.graph_templates))
            for pom in tmap.poms:
                try:
                    obj = _object_term(pom.object_map, row, by_name, doc.prefixes)
                except NullCell:
                    continue
                graphs = subject_graphs + _expand_graphs(pom.graph_templates, row, doc.prefixes)
                declared = bool(tmap.subject.graph_templates or pom.graph_templates)
                _emit(dataset, subject, pom.predicate, obj, graphs, declared)
    return dataset


def _expand_graphs(templates: list, row: dict, prefixes: PrefixTable) -> list:
    graphs = []
    for template in templates:
        try:
            graphs.append(_expand_iri(template, row, prefixes))
        except NullCell:
            continue
    return graphs


def _object_term(object_map, row: dict, by_name: dict, prefixes: PrefixTable):
    if isinstance(object_map, ConstantMap):
        return object_map.term
    if isinstance(object_map, ParentRefMap):
        parent = by_name[object_map.target]
        return _expand_iri(parent.subject.template, row, prefixes)
    if object_map.term_type == "iri":
        return _expand_iri(object_map.pattern, row, prefixes)
    value = expand_template(object_map.pattern, row, iri_safe=False)
    if object_map.language:
        return Literal(value, language=object_map.language)
    if object_map.datatype:
        return Literal(value, datatype=object_map.datatype)
    return Literal(value)


def _emit(dataset: Dataset, subject, predicate, obj, graphs: list, declared: bool):
    if graphs:
        for graph in graphs:
            dataset.add(Quad(subject, predicate, obj, graph))
    elif not declared:
        dataset.add(Quad(subject, predicate, obj, DEFAULT_GRAPH))
    # declared graph maps that all resolved to NULL emit nothing
