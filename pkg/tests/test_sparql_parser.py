import pytest

from kgsu.fixtures import QUERY_NAMES, query_text
from kgsu.model import Iri
from kgsu.sparql.ast import (
    Bgp,
    ConstructQuery,
    Filter,
    Graph,
    Group,
    Not,
    NotEquals,
    NotIn,
    Optional_,
    PathOneOrMore,
    SelectQuery,
    StrStarts,
    Unsupported,
    Values,
    Var,
)
from kgsu.sparql.parser import parse_query
from kgsu.trig import ParseError


def flatten(group):
    out = []
    for item in group.items:
        out.append(item)
        if isinstance(item, (Group, Optional_)):
            out.extend(flatten(item.inner if isinstance(item, Optional_) else item))
        elif isinstance(item, Graph):
            out.extend(flatten(item.inner))
    return out


class TestFixtureQueries:
    @pytest.mark.parametrize("name", QUERY_NAMES)
    def test_all_fixture_queries_parse(self, name):
        ast = parse_query(query_text(name))
        assert isinstance(ast, (SelectQuery, ConstructQuery))

    def test_unit_triples_shape(self):
        ast = parse_query(query_text("unit_triples"))
        assert isinstance(ast, SelectQuery)
        assert [v.name for v in ast.projection] == ["s", "p", "o"]
        graphs = [i for i in flatten(ast.where) if isinstance(i, Graph)]
        assert len(graphs) == 1
        assert isinstance(graphs[0].name, Iri)
        inner = [i for i in flatten(graphs[0].inner) if isinstance(i, Bgp)]
        assert len(inner[0].patterns) == 1

    def test_values_block(self):
        ast = parse_query(query_text("authors_roles_direct"))
        values = [i for i in flatten(ast.where) if isinstance(i, Values)]
        assert len(values) == 1
        assert values[0].var == Var("role")
        assert len(values[0].terms) == 2
        assert all(isinstance(t, Iri) for t in values[0].terms)
        assert [v.name for v in ast.order_by] == ["role", "label"]

    def test_star_projection_and_limit(self):
        ast = parse_query("SELECT * WHERE { ?s ?p ?o } LIMIT 100")
        assert ast.projection is None
        assert ast.limit == 100

    def test_path_one_or_more(self):
        ast = parse_query(query_text("subject_units"))
        optionals = [i for i in flatten(ast.where) if isinstance(i, Optional_)]
        assert len(optionals) == 1
        bgps = [i for i in flatten(optionals[0].inner) if isinstance(i, Bgp)]
        pred = bgps[0].patterns[0].predicate
        assert isinstance(pred, PathOneOrMore)
        assert pred.predicate.value.endswith("hasAssociatedSemanticUnit")

    def test_not_in_filter(self):
        ast = parse_query(query_text("remote_sensing_pubs_units"))
        filters = [i for i in flatten(ast.where) if isinstance(i, Filter)]
        not_ins = [f for f in filters if isinstance(f.expr, NotIn)]
        assert len(not_ins) == 2
        assert len(not_ins[0].expr.terms if hasattr(not_ins[0], "expr") else not_ins[0].terms) == 2

    def test_graph_variable(self):
        ast = parse_query(query_text("remote_sensing_pubs_units"))
        graph_vars = [i for i in flatten(ast.where) if isinstance(i, Graph) and isinstance(i.name, Var)]
        assert len(graph_vars) == 5
        assert all(g.name == Var("compoundUnit") for g in graph_vars)
        assert ast.distinct is True

    def test_construct_form(self):
        ast = parse_query(query_text("links_unit_construct"))
        assert isinstance(ast, ConstructQuery)
        assert len(ast.template) == 1
        assert ast.limit == 100

    def test_ne_filters(self):
        ast = parse_query(query_text("dataset_links_direct"))
        filters = [i for i in flatten(ast.where) if isinstance(i, Filter)]
        assert len(filters) == 4
        assert all(isinstance(f.expr, NotEquals) for f in filters)


class TestFilterExpressions:
    def test_strstarts_with_not(self):
        ast = parse_query(
            'SELECT $this WHERE { FILTER ( !STRSTARTS(STR($this), "http://example.com/base/") ) }'
        )
        expr = ast.where.items[0].expr
        assert isinstance(expr, Not)
        assert isinstance(expr.inner, StrStarts)
        assert expr.inner.prefix.lexical == "http://example.com/base/"
        assert ast.projection == [Var("this")]

    def test_isiri_and_conjunction(self):
        text = """
        PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
        SELECT ?x WHERE {
          ?x rdf:type ?t .
          FILTER ( isIRI(?t) && STRSTARTS(STR(?t), "http://purl.org/") )
        }
        """
        ast = parse_query(text)
        assert ast.where.items[1].expr.__class__.__name__ == "And"

    def test_not_exists(self):
        text = """
        PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#>
        SELECT ?x WHERE {
          ?x rdf:type ?t .
          FILTER NOT EXISTS { ?x rdf:type <http://purl.org/spar/fabio/Book> }
        }
        """
        ast = parse_query(text)
        expr = ast.where.items[1].expr
        assert isinstance(expr, Not)
        assert expr.inner.__class__.__name__ == "Exists"


class TestErrors:
    def test_unsupported_features_are_named(self):
        cases = {
            "SELECT ?s WHERE { { ?s ?p ?o } UNION { ?s ?p ?o } }": "UNION",
            "SELECT ?s WHERE { ?s ?p ?o . BIND(?p AS ?x) }": "BIND",
            "SELECT ?s WHERE { ?s ?p ?o . MINUS { ?s ?p ?o } }": "MINUS",
            "SELECT ?s WHERE { ?s ?p ?o } OFFSET 5": "OFFSET",
            "SELECT ?s WHERE { ?s <http://x/p>* ?o }": "*",
            "ASK { ?s ?p ?o }": "ASK",
        }
        for text, feature in cases.items():
            with pytest.raises(Unsupported) as err:
                parse_query(text)
            assert feature in str(err.value)

    def test_parse_error_reports_position(self):
        with pytest.raises(ParseError) as err:
            parse_query("SELECT ?s WHERE { ?s <http://x/p> }")
        assert err.value.line == 1
        assert err.value.column == 35

    def test_undeclared_prefix(self):
        with pytest.raises(ParseError):
            parse_query("SELECT ?s WHERE { ?s ex:p ?o }")

    def test_keywords_case_insensitive_vars_case_sensitive(self):
        ast = parse_query("select distinct ?Links where { ?s ?p ?Links } limit 3")
        assert ast.distinct and ast.limit == 3
        assert ast.projection == [Var("Links")]
