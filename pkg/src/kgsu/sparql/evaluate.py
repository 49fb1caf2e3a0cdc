"""Evaluation of the SPARQL subset over a dataset snapshot.

Semantics:

- Basic patterns outside GRAPH evaluate over the union of the default
  graph and all named graphs, with duplicate triples collapsed.
- ``GRAPH <iri>`` scopes inner patterns to that graph; ``GRAPH ?g``
  iterates all named graphs, binding the variable.
- OPTIONAL is a left join at its syntactic position; FILTER applies to
  its whole group, and expression errors drop the row rather than raise.
- ``<p>+`` binds every pair in the transitive closure of ``p`` within
  the active graph scope.
- Rows are sorted by ORDER BY (IRIs < blank nodes < literals, then
  lexically; unbound first), projected, deduplicated by DISTINCT, and
  truncated by LIMIT, in that order.
"""

from __future__ import annotations

from typing import Iterable, Optional

from kgsu.model import Dataset, Iri, Literal, Triple, term_sort_key
from kgsu.sparql.ast import (
    And,
    Bgp,
    ConstructQuery,
    Exists,
    Filter,
    Graph,
    Group,
    IsIri,
    Not,
    NotEquals,
    NotIn,
    Optional_,
    PathOneOrMore,
    SelectQuery,
    StrStarts,
    Values,
    Var,
    walk_vars,
)


class EvalError(RuntimeError):
    """Malformed AST; data conditions never raise."""


class _FilterError(Exception):
    """Expression error inside FILTER; coerces to false."""


class Solution:
    """Ordered binding rows; absent variables are simply missing keys."""

    def __init__(self, variables: list, rows: list):
        self.vars = variables
        self.rows = rows

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows if name in row]

    def __repr__(self):
        return f"Solution(vars={self.vars}, rows={len(self.rows)})"


_UNION = None


def _resolve(node, row):
    if isinstance(node, Var):
        return row.get(node.name)
    return node


def _bind(row, pattern, s, p, o):
    new = row
    for pos, value in ((pattern.subject, s), (pattern.predicate, p), (pattern.object, o)):
        if isinstance(pos, Var):
            existing = new.get(pos.name)
            if existing is None:
                if new is row:
                    new = dict(row)
                new[pos.name] = value
            elif existing != value:
                return None
    return new


def _match_pattern(ds: Dataset, row: dict, pattern, scope):
    if isinstance(pattern.predicate, PathOneOrMore):
        yield from _match_path(ds, row, pattern, scope)
        return
    s = _resolve(pattern.subject, row)
    p = _resolve(pattern.predicate, row)
    o = _resolve(pattern.object, row)
    if isinstance(s, Literal):
        return
    if scope is _UNION:
        seen = set()
        for quad in ds.match(s, p, o, None):
            key = (quad.subject, quad.predicate, quad.object)
            if key in seen:
                continue
            seen.add(key)
            new = _bind(row, pattern, *key)
            if new is not None:
                yield new
    else:
        for quad in ds.match(s, p, o, scope):
            new = _bind(row, pattern, quad.subject, quad.predicate, quad.object)
            if new is not None:
                yield new


def _edge_set(ds: Dataset, predicate: Iri, scope):
    edges = set()
    for quad in ds.match(None, predicate, None, scope if scope is not _UNION else None):
        edges.add((quad.subject, quad.object))
    return edges


def _reachable(starts: Iterable, adjacency: dict) -> set:
    """Nodes reachable in one or more steps."""
    out: set = set()
    stack = []
    for start in starts:
        stack.extend(adjacency.get(start, ()))
    while stack:
        node = stack.pop()
        if node in out:
            continue
        out.add(node)
        stack.extend(adjacency.get(node, ()))
    return out


def _match_path(ds: Dataset, row: dict, pattern, scope):
    s = _resolve(pattern.subject, row)
    o = _resolve(pattern.object, row)
    edges = _edge_set(ds, pattern.predicate.predicate, scope)
    forward: dict = {}
    backward: dict = {}
    for a, b in edges:
        forward.setdefault(a, []).append(b)
        backward.setdefault(b, []).append(a)

    if s is not None and o is not None:
        if o in _reachable([s], forward):
            yield row
        return
    if s is not None:
        for target in _reachable([s], forward):
            new = _bind(row, pattern, s, None, target)
            if new is not None:
                yield new
        return
    if o is not None:
        for source in _reachable([o], backward):
            new = _bind(row, pattern, source, None, o)
            if new is not None:
                yield new
        return
    for source in forward:
        for target in _reachable([source], forward):
            new = _bind(row, pattern, source, None, target)
            if new is not None:
                yield new


def _eval_group(ds: Dataset, group: Group, rows: list, scope) -> list:
    filters = []
    for item in group.items:
        if isinstance(item, Filter):
            filters.append(item)
            continue
        if isinstance(item, Bgp):
            for pattern in item.patterns:
                rows = [new for row in rows for new in _match_pattern(ds, row, pattern, scope)]
        elif isinstance(item, Graph):
            rows = _eval_graph(ds, item, rows, scope)
        elif isinstance(item, Optional_):
            extended = []
            for row in rows:
                matches = _eval_group(ds, item.inner, [row], scope)
                extended.extend(matches if matches else [row])
            rows = extended
        elif isinstance(item, Values):
            out = []
            name = item.var.name
            for row in rows:
                bound = row.get(name)
                if bound is not None:
                    if any(bound == term for term in item.terms):
                        out.append(row)
                else:
                    for term in item.terms:
                        new = dict(row)
                        new[name] = term
                        out.append(new)
            rows = out
        elif isinstance(item, Group):
            rows = _eval_group(ds, item, rows, scope)
        else:
            raise EvalError(f"unknown pattern node: {item!r}")
    for item in filters:
        rows = [row for row in rows if _filter_passes(ds, item.expr, row, scope)]
    return rows


def _eval_graph(ds: Dataset, item: Graph, rows: list, outer_scope) -> list:
    if isinstance(item.name, Var):
        name = item.name.name
        graphs = ds.named_graphs()
        out = []
        for row in rows:
            bound = row.get(name)
            if bound is not None:
                if isinstance(bound, Iri):
                    out.extend(_eval_group(ds, item.inner, [row], bound))
            else:
                for graph in graphs:
                    new = dict(row)
                    new[name] = graph
                    out.extend(_eval_group(ds, item.inner, [new], graph))
        return out
    return _eval_group(ds, item.inner, rows, item.name)


def _filter_passes(ds, expr, row, scope) -> bool:
    try:
        return _ebv(ds, expr, row, scope)
    except _FilterError:
        return False


def _value(node, row):
    if isinstance(node, Var):
        value = row.get(node.name)
        if value is None:
            raise _FilterError("unbound variable")
        return value
    return node


def _string_of(term) -> str:
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, Literal):
        return term.lexical
    raise _FilterError("STR of a blank node")


def _ebv(ds, expr, row, scope) -> bool:
    if isinstance(expr, NotEquals):
        return _value(expr.left, row) != _value(expr.right, row)
    if isinstance(expr, NotIn):
        value = _value(expr.arg, row)
        return all(value != term for term in expr.terms)
    if isinstance(expr, StrStarts):
        return _string_of(_value(expr.arg, row)).startswith(expr.prefix.lexical)
    if isinstance(expr, IsIri):
        return isinstance(_value(expr.arg, row), Iri)
    if isinstance(expr, Not):
        return not _ebv(ds, expr.inner, row, scope)
    if isinstance(expr, And):
        left = right = None
        try:
            left = _ebv(ds, expr.left, row, scope)
        except _FilterError:
            pass
        try:
            right = _ebv(ds, expr.right, row, scope)
        except _FilterError:
            pass
        if left is False or right is False:
            return False
        if left is None or right is None:
            raise _FilterError("error in &&")
        return True
    if isinstance(expr, Exists):
        return bool(_eval_group(ds, expr.group, [dict(row)], scope))
    if isinstance(expr, (Var, Iri, Literal)):
        value = _value(expr, row)
        if isinstance(value, Literal):
            if value.lexical in ("true", "false"):
                return value.lexical == "true"
            return bool(value.lexical)
        raise _FilterError("non-boolean filter value")
    raise EvalError(f"unknown filter expression: {expr!r}")


def _row_sort_key(row, order_names):
    key = []
    for name in order_names:
        term = row.get(name)
        key.append((-2, "", "", "") if term is None else term_sort_key(term))
    return key


def evaluate(dataset: Dataset, ast, initial_binding: Optional[dict] = None):
    """Evaluate a parsed query.

    Returns a :class:`Solution` for SELECT and a set of Triples for
    CONSTRUCT. ``initial_binding`` pre-binds variables (name -> term).
    """
    start = [dict(initial_binding)] if initial_binding else [{}]
    if isinstance(ast, SelectQuery):
        rows = _eval_group(dataset, ast.where, start, _UNION)
        if ast.order_by:
            names = [v.name for v in ast.order_by]
            rows.sort(key=lambda row: _row_sort_key(row, names))
        if ast.projection is None:
            variables = [v.name for v in walk_vars(ast.where)]
        else:
            variables = [v.name for v in ast.projection]
        projected = [{name: row[name] for name in variables if name in row} for row in rows]
        if ast.distinct:
            seen = set()
            unique = []
            for row in projected:
                key = tuple(row.get(name) for name in variables)
                if key not in seen:
                    seen.add(key)
                    unique.append(row)
            projected = unique
        if ast.limit is not None:
            projected = projected[: ast.limit]
        return Solution(variables, projected)

    if isinstance(ast, ConstructQuery):
        rows = _eval_group(dataset, ast.where, start, _UNION)
        if ast.order_by:
            names = [v.name for v in ast.order_by]
            rows.sort(key=lambda row: _row_sort_key(row, names))
        if ast.limit is not None:
            rows = rows[: ast.limit]
        triples = set()
        for row in rows:
            for pattern in ast.template:
                s = _resolve(pattern.subject, row)
                p = _resolve(pattern.predicate, row)
                o = _resolve(pattern.object, row)
                if s is None or p is None or o is None:
                    continue
                if isinstance(s, Literal) or not isinstance(p, Iri):
                    continue
                triples.add(Triple(s, p, o))
        return triples

    raise EvalError(f"not a query AST: {ast!r}")
