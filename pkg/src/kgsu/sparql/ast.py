"""Query AST for the SPARQL subset the engine evaluates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from kgsu.model import Iri, Literal, Term


class Unsupported(ValueError):
    """A SPARQL feature outside the supported subset."""

    def __init__(self, feature: str):
        self.feature = feature
        super().__init__(f"unsupported SPARQL feature: {feature}")


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"?{self.name}"


@dataclass(frozen=True)
class PathOneOrMore:
    """Property path `<p>+` over a single IRI."""

    predicate: Iri


VarOrTerm = Union[Var, Term]


@dataclass(frozen=True)
class TriplePattern:
    subject: VarOrTerm
    predicate: Union[Var, Iri, PathOneOrMore]
    object: VarOrTerm


@dataclass
class Bgp:
    patterns: list


@dataclass
class Graph:
    name: Union[Iri, Var]
    inner: "Group"


@dataclass
class Optional_:
    inner: "Group"


@dataclass
class Filter:
    expr: object


@dataclass
class Values:
    var: Var
    terms: list


@dataclass
class Group:
    items: list = field(default_factory=list)


# filter expressions --------------------------------------------------


@dataclass
class NotEquals:
    left: object
    right: object


@dataclass
class NotIn:
    arg: object
    terms: list


@dataclass
class StrStarts:
    """STRSTARTS(STR(arg), prefix)."""

    arg: object
    prefix: Literal


@dataclass
class IsIri:
    arg: object


@dataclass
class Not:
    inner: object


@dataclass
class And:
    left: object
    right: object


@dataclass
class Exists:
    group: Group


# query forms ----------------------------------------------------------


@dataclass
class SelectQuery:
    prefixes: dict
    distinct: bool
    projection: Optional[list]  # list of Var, or None for '*'
    where: Group
    order_by: list = field(default_factory=list)
    limit: Optional[int] = None


@dataclass
class ConstructQuery:
    prefixes: dict
    template: list  # list of TriplePattern
    where: Group = field(default_factory=Group)
    order_by: list = field(default_factory=list)
    limit: Optional[int] = None


QueryAst = Union[SelectQuery, ConstructQuery]


def walk_vars(node):
    """Variables in syntactic order of first appearance (filters excluded)."""
    seen = []

    def visit(n):
        if isinstance(n, Group):
            for item in n.items:
                visit(item)
        elif isinstance(n, Bgp):
            for pat in n.patterns:
                for pos in (pat.subject, pat.predicate, pat.object):
                    if isinstance(pos, Var) and pos not in seen:
                        seen.append(pos)
        elif isinstance(n, Graph):
            if isinstance(n.name, Var) and n.name not in seen:
                seen.append(n.name)
            visit(n.inner)
        elif isinstance(n, Optional_):
            visit(n.inner)
        elif isinstance(n, Values):
            if n.var not in seen:
                seen.append(n.var)

    visit(node)
    return seen
