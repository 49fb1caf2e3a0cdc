"""SHACL subset validation: node shapes with property and query constraints.

Shapes target class instances; property constraints cover cardinality,
datatype, node kind, an anchored-style regex dialect (anchors, `\\s`,
`\\d`, `+`, dot, literal escapes - nothing else), language tags, and
recursive node conformance. Query constraints substitute each focus node
for `$this` as a term-level binding and report one violation per
returned row. Values are deduplicated triples over the union graph, so
a statement copied into several named graphs counts once.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from kgsu.model import BlankNode, Dataset, Iri, Literal, term_sort_key
from kgsu.namespaces import RDF_FIRST, RDF_NIL, RDF_REST, RDF_TYPE, SH_NS
from kgsu.sparql import evaluate, parse_query
from kgsu.trig import parse_turtle


class ShaclError(ValueError):
    pass


class UnsupportedShacl(ShaclError):
    def __init__(self, term: str):
        self.term = term
        super().__init__(f"unsupported SHACL construct: {term}")


class MissingTarget(ShaclError):
    pass


@dataclass
class SparqlConstraint:
    message: str
    select_text: str


@dataclass
class PropertyConstraint:
    path: Iri
    min_count: Optional[int] = None
    max_count: Optional[int] = None
    datatype: Optional[str] = None
    node_kind: Optional[str] = None  # "iri" | "literal" | "bnode"
    pattern: Optional[str] = None
    language_in: Optional[list] = None
    unique_lang: bool = False
    node_shape: Optional[Iri] = None
    message: Optional[str] = None


@dataclass
class NodeShape:
    iri: Iri
    target_class: Iri
    constraints: list = field(default_factory=list)


@dataclass
class Violation:
    focus: object
    shape: str
    kind: str
    message: str
    path: Optional[str] = None
    value: Optional[object] = None

    def to_dict(self) -> dict:
        out = {
            "focus": _term_repr(self.focus),
            "shape": self.shape,
            "constraint": self.kind,
            "message": self.message,
        }
        if self.path:
            out["path"] = self.path
        if self.value is not None:
            out["value"] = _term_repr(self.value)
        return out


@dataclass
class ValidationReport:
    conforms: bool
    violations: list

    def to_dict(self) -> dict:
        return {"conforms": self.conforms, "violations": [v.to_dict() for v in self.violations]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        if self.conforms:
            return "conforms: true\n"
        lines = [f"conforms: false ({len(self.violations)} violation(s))"]
        for v in self.violations:
            lines.append(f"- focus {_term_repr(v.focus)}")
            lines.append(f"  shape {v.shape} [{v.kind}]" + (f" path {v.path}" if v.path else ""))
            lines.append(f"  {v.message}")
            if v.value is not None:
                lines.append(f"  value: {_term_repr(v.value)}")
        return "\n".join(lines) + "\n"


def _term_repr(term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return "_:" + term.label
    if isinstance(term, Literal):
        return term.lexical
    return str(term)


_SH = {name: Iri(SH_NS + name) for name in (
    "NodeShape", "targetClass", "property", "sparql", "path", "minCount", "maxCount",
    "datatype", "nodeKind", "pattern", "languageIn", "uniqueLang", "node", "message",
    "select", "IRI", "Literal", "BlankNode",
)}

_NODE_KINDS = {_SH["IRI"]: "iri", _SH["Literal"]: "literal", _SH["BlankNode"]: "bnode"}

_ALLOWED_ESCAPES = set("sd\\.+^$")
_FORBIDDEN_REGEX_CHARS = set("*?[](){}|")


def _validate_pattern(pattern: str):
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "\\":
            if i + 1 >= len(pattern) or pattern[i + 1] not in _ALLOWED_ESCAPES:
                raise UnsupportedShacl(f"regex escape \\{pattern[i + 1:i + 2]}")
            i += 2
            continue
        if ch in _FORBIDDEN_REGEX_CHARS:
            raise UnsupportedShacl(f"regex construct {ch!r}")
        i += 1
    try:
        re.compile(pattern)
    except re.error as exc:
        raise UnsupportedShacl(f"regex {pattern!r}: {exc}")


class _ShapeIndex:
    def __init__(self, quads):
        self.by_subject: dict = {}
        self.order: list = []
        for quad in quads:
            if quad.subject not in self.by_subject:
                self.order.append(quad.subject)
            self.by_subject.setdefault(quad.subject, []).append((quad.predicate, quad.object))

    def objects(self, node, predicate):
        return [o for p, o in self.by_subject.get(node, []) if p == predicate]

    def one(self, node, predicate):
        values = self.objects(node, predicate)
        return values[0] if values else None

    def check_vocabulary(self, node, allowed):
        for p, _ in self.by_subject.get(node, []):
            if p.value.startswith(SH_NS) and p not in allowed:
                raise UnsupportedShacl(f"sh:{p.value[len(SH_NS):]}")

    def read_list(self, head) -> list:
        items = []
        nil = Iri(RDF_NIL)
        first, rest = Iri(RDF_FIRST), Iri(RDF_REST)
        while head != nil:
            value = self.one(head, first)
            if value is None:
                raise UnsupportedShacl("malformed RDF list")
            items.append(value)
            head = self.one(head, rest)
            if head is None:
                raise UnsupportedShacl("malformed RDF list")
        return items


def parse_shapes(turtle_text: str):
    """Parse node shapes; raises UnsupportedShacl / MissingTarget."""
    quads, prefixes = parse_turtle(turtle_text)
    index = _ShapeIndex(quads)
    rdf_type = Iri(RDF_TYPE)
    prefix_header = "".join(f"PREFIX {label}: <{ns}>\n" for label, ns in sorted(prefixes.items()))

    shapes = []
    for node in index.order:
        if _SH["NodeShape"] not in index.objects(node, rdf_type):
            continue
        index.check_vocabulary(node, {_SH["targetClass"], _SH["property"], _SH["sparql"]})
        target = index.one(node, _SH["targetClass"])
        if not isinstance(target, Iri):
            raise MissingTarget(f"shape {_term_repr(node)} has no sh:targetClass")
        constraints = []
        for prop_node in index.objects(node, _SH["property"]):
            prop, nested = _parse_property(index, prop_node, prefix_header)
            constraints.append(prop)
            constraints.extend(nested)
        for sparql_node in index.objects(node, _SH["sparql"]):
            constraints.append(_parse_sparql(index, sparql_node, prefix_header))
        shapes.append(NodeShape(iri=node, target_class=target, constraints=constraints))

    _reject_node_cycles(shapes)
    return shapes


def _parse_property(index: _ShapeIndex, node, prefix_header: str):
    index.check_vocabulary(
        node,
        {
            _SH["path"], _SH["minCount"], _SH["maxCount"], _SH["datatype"], _SH["nodeKind"],
            _SH["pattern"], _SH["languageIn"], _SH["uniqueLang"], _SH["node"], _SH["message"],
            _SH["sparql"],
        },
    )
    path = index.one(node, _SH["path"])
    if not isinstance(path, Iri):
        raise UnsupportedShacl("sh:path must be a single predicate IRI")
    prop = PropertyConstraint(path=path)
    min_count = index.one(node, _SH["minCount"])
    if min_count is not None:
        prop.min_count = int(min_count.lexical)
    max_count = index.one(node, _SH["maxCount"])
    if max_count is not None:
        prop.max_count = int(max_count.lexical)
    datatype = index.one(node, _SH["datatype"])
    if datatype is not None:
        if not isinstance(datatype, Iri):
            raise UnsupportedShacl("sh:datatype must be an IRI")
        prop.datatype = datatype.value
    node_kind = index.one(node, _SH["nodeKind"])
    if node_kind is not None:
        if node_kind not in _NODE_KINDS:
            raise UnsupportedShacl(f"sh:nodeKind {_term_repr(node_kind)}")
        prop.node_kind = _NODE_KINDS[node_kind]
    pattern = index.one(node, _SH["pattern"])
    if pattern is not None:
        _validate_pattern(pattern.lexical)
        prop.pattern = pattern.lexical
    language_in = index.one(node, _SH["languageIn"])
    if language_in is not None:
        tags = index.read_list(language_in)
        prop.language_in = [t.lexical for t in tags if isinstance(t, Literal)]
    unique_lang = index.one(node, _SH["uniqueLang"])
    if unique_lang is not None:
        prop.unique_lang = unique_lang.lexical == "true"
    node_shape = index.one(node, _SH["node"])
    if node_shape is not None:
        if not isinstance(node_shape, Iri):
            raise UnsupportedShacl("sh:node must reference a named shape")
        prop.node_shape = node_shape
    message = index.one(node, _SH["message"])
    if message is not None:
        prop.message = message.lexical
    nested = [
        _parse_sparql(index, sparql_node, prefix_header)
        for sparql_node in index.objects(node, _SH["sparql"])
    ]
    return prop, nested


def _parse_sparql(index: _ShapeIndex, node, prefix_header: str) -> SparqlConstraint:
    index.check_vocabulary(node, {_SH["message"], _SH["select"]})
    select = index.one(node, _SH["select"])
    if not isinstance(select, Literal):
        raise UnsupportedShacl("sh:sparql without sh:select")
    message = index.one(node, _SH["message"])
    text = prefix_header + select.lexical
    parse_query(text)  # constraint bodies must parse up front
    return SparqlConstraint(
        message=message.lexical if isinstance(message, Literal) else "query constraint violated",
        select_text=text,
    )


def _reject_node_cycles(shapes):
    by_iri = {shape.iri: shape for shape in shapes}
    WHITE, GRAY, BLACK = 0, 1, 2
    state = {shape.iri: WHITE for shape in shapes}

    def visit(iri):
        state[iri] = GRAY
        shape = by_iri.get(iri)
        if shape is not None:
            for constraint in shape.constraints:
                if isinstance(constraint, PropertyConstraint) and constraint.node_shape:
                    ref = constraint.node_shape
                    if state.get(ref) == GRAY:
                        raise UnsupportedShacl(f"sh:node cycle through {ref.value}")
                    if state.get(ref, BLACK) == WHITE:
                        visit(ref)
        state[iri] = BLACK

    for shape in shapes:
        if state[shape.iri] == WHITE:
            visit(shape.iri)


# validation ------------------------------------------------------------

_MAX_NODE_DEPTH = 8


def _focus_nodes(dataset: Dataset, target_class: Iri) -> list:
    subjects = {quad.subject for quad in dataset.match(predicate=Iri(RDF_TYPE), object=target_class)}
    return sorted(subjects, key=term_sort_key)


def _property_values(dataset: Dataset, focus, path: Iri) -> list:
    values = {quad.object for quad in dataset.match(subject=focus, predicate=path)}
    return sorted(values, key=term_sort_key)


class _Validator:
    def __init__(self, dataset: Dataset, shapes):
        self.dataset = dataset
        self.shapes = shapes
        self.by_iri = {shape.iri: shape for shape in shapes}
        self._ast_cache: dict = {}

    def run(self) -> ValidationReport:
        violations = []
        for shape in self.shapes:
            for focus in _focus_nodes(self.dataset, shape.target_class):
                violations.extend(self.check_focus(focus, shape, depth=0))
        violations.sort(key=lambda v: (term_sort_key(v.focus), v.shape, v.kind, v.path or ""))
        return ValidationReport(conforms=not violations, violations=violations)

    def conforms(self, focus, shape: NodeShape, depth: int) -> bool:
        return not self.check_focus(focus, shape, depth)

    def check_focus(self, focus, shape: NodeShape, depth: int) -> list:
        if depth > _MAX_NODE_DEPTH:
            raise UnsupportedShacl("sh:node recursion exceeds depth 8")
        out = []
        for constraint in shape.constraints:
            if isinstance(constraint, PropertyConstraint):
                out.extend(self._check_property(focus, shape, constraint, depth))
            else:
                out.extend(self._check_sparql(focus, shape, constraint))
        return out

    def _violation(self, focus, shape, kind, constraint, value=None, fallback=""):
        message = getattr(constraint, "message", None) or fallback
        path = getattr(constraint, "path", None)
        return Violation(
            focus=focus,
            shape=shape.iri.value,
            kind=kind,
            message=message,
            path=path.value if path else None,
            value=value,
        )

    def _check_property(self, focus, shape, prop: PropertyConstraint, depth: int) -> list:
        values = _property_values(self.dataset, focus, prop.path)
        out = []
        if prop.min_count is not None and len(values) < prop.min_count:
            out.append(
                self._violation(
                    focus, shape, "min_count", prop,
                    fallback=f"expected at least {prop.min_count} value(s) for {prop.path.value}",
                )
            )
        if prop.max_count is not None and len(values) > prop.max_count:
            out.append(
                self._violation(
                    focus, shape, "max_count", prop,
                    fallback=f"expected at most {prop.max_count} value(s) for {prop.path.value}",
                )
            )
        for value in values:
            if prop.datatype is not None:
                if not isinstance(value, Literal) or value.datatype != prop.datatype:
                    out.append(
                        self._violation(
                            focus, shape, "datatype", prop, value=value,
                            fallback=f"value is not a {prop.datatype} literal",
                        )
                    )
            if prop.node_kind is not None:
                kinds = {"iri": Iri, "literal": Literal, "bnode": BlankNode}
                if not isinstance(value, kinds[prop.node_kind]):
                    out.append(
                        self._violation(
                            focus, shape, "node_kind", prop, value=value,
                            fallback=f"value is not of kind {prop.node_kind}",
                        )
                    )
            if prop.pattern is not None:
                if not isinstance(value, Literal) or not re.search(prop.pattern, value.lexical):
                    out.append(
                        self._violation(
                            focus, shape, "pattern", prop, value=value,
                            fallback=f"value does not match {prop.pattern!r}",
                        )
                    )
            if prop.language_in is not None:
                tags = [t.lower() for t in prop.language_in]
                if not isinstance(value, Literal) or not value.language or value.language.lower() not in tags:
                    out.append(
                        self._violation(
                            focus, shape, "language_in", prop, value=value,
                            fallback=f"language tag not in {prop.language_in}",
                        )
                    )
            if prop.node_shape is not None:
                ref = self.by_iri.get(prop.node_shape)
                if ref is None:
                    raise UnsupportedShacl(f"sh:node references unknown shape {prop.node_shape.value}")
                if not self.conforms(value, ref, depth + 1):
                    out.append(
                        self._violation(
                            focus, shape, "node", prop, value=value,
                            fallback=f"value does not conform to shape {ref.iri.value}",
                        )
                    )
        if prop.unique_lang:
            seen: dict = {}
            for value in values:
                if isinstance(value, Literal) and value.language:
                    seen.setdefault(value.language.lower(), []).append(value)
            for tag, tagged in sorted(seen.items()):
                if len(tagged) > 1:
                    out.append(
                        self._violation(
                            focus, shape, "unique_lang", prop, value=tagged[0],
                            fallback=f"duplicate language tag {tag!r}",
                        )
                    )
        return out

    def _check_sparql(self, focus, shape, constraint: SparqlConstraint) -> list:
        ast = self._ast_cache.get(constraint.select_text)
        if ast is None:
            ast = parse_query(constraint.select_text)
            self._ast_cache[constraint.select_text] = ast
        solution = evaluate(self.dataset, ast, initial_binding={"this": focus})
        return [
            Violation(
                focus=focus,
                shape=shape.iri.value,
                kind="sparql",
                message=constraint.message,
                value=row.get("v"),
            )
            for row in solution.rows
        ]


def validate(dataset: Dataset, shapes) -> ValidationReport:
    """Check every focus node of every shape; report is order-normalized."""
    return _Validator(dataset, shapes).run()
