"""SELECT solutions as JSON, and the inverse for transport round-trips."""

from __future__ import annotations

import json

from kgsu.model import BlankNode, Iri, Literal
from kgsu.namespaces import XSD_STRING
from kgsu.sparql.evaluate import Solution


def _term_to_json(term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.label}
    if isinstance(term, Literal):
        out = {"type": "literal", "value": term.lexical}
        if term.language:
            out["lang"] = term.language
        elif term.datatype and term.datatype != XSD_STRING:
            out["datatype"] = term.datatype
        return out
    raise TypeError(f"not a term: {term!r}")


def _term_from_json(obj: dict):
    kind = obj["type"]
    if kind == "uri":
        return Iri(obj["value"])
    if kind == "bnode":
        return BlankNode(obj["value"])
    if kind == "literal":
        return Literal(obj["value"], datatype=obj.get("datatype"), language=obj.get("lang"))
    raise ValueError(f"unknown term type: {kind!r}")


def solution_to_dict(solution: Solution, truncated: bool = False) -> dict:
    bindings = [
        {name: _term_to_json(term) for name, term in row.items()} for row in solution.rows
    ]
    out = {"head": {"vars": list(solution.vars)}, "results": {"bindings": bindings}}
    if truncated:
        out["truncated"] = True
    return out


def solutions_to_json(solution: Solution) -> str:
    return json.dumps(solution_to_dict(solution), ensure_ascii=False, indent=2)


def solutions_from_json(text: str) -> Solution:
    data = json.loads(text)
    variables = list(data["head"]["vars"])
    rows = [
        {name: _term_from_json(obj) for name, obj in binding.items()}
        for binding in data["results"]["bindings"]
    ]
    return Solution(variables, rows)
