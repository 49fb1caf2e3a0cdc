import random

import pytest

from kgsu.model import DEFAULT_GRAPH, Dataset, Iri, Literal, Quad, Triple
from kgsu.namespaces import RDF_TYPE, RDFS_LABEL
from kgsu.sparql import evaluate, parse_query
from kgsu.units import (
    BASE_NS,
    CLASS_COMPOUND_UNIT,
    CLASS_IDENTIFICATION_UNIT,
    CLASS_STATEMENT_UNIT,
    PROP_ASSOC,
    PROP_SUBJECT,
    InvalidLocalPart,
    InvariantViolation,
    SemanticUnit,
    associations,
    construct_view,
    extract,
    materialize,
    mint_unit_iri,
    remove_unit,
    unit_detail,
    units_for_subject,
    vis_graph,
)


def ex(local):
    return Iri(BASE_NS + local)


def identification_unit(pub_local, n_data=2):
    unit_iri = mint_unit_iri("namedindividualidentificationunit", pub_local)
    data = [
        Triple(ex(pub_local), Iri(RDFS_LABEL), Literal(f"{pub_local} label {i}", language="en"))
        for i in range(n_data)
    ]
    return SemanticUnit(
        iri=unit_iri,
        kinds=[Iri(CLASS_IDENTIFICATION_UNIT)],
        subject=ex(pub_local),
        data_triples=data,
    )


class TestMinting:
    def test_identification_unit_iri(self):
        iri = mint_unit_iri("namedindividualidentificationunit", "Publication_31709")
        assert iri.value == (
            "http://example.com/base/semunit/namedindividualidentificationunit/Publication_31709"
        )

    def test_links_compound_iri(self):
        iri = mint_unit_iri("linksCompoundUnit", "Dataset_20907")
        assert iri.value == "http://example.com/base/semunit/linksCompoundUnit/Dataset_20907"

    def test_rejects_whitespace(self):
        with pytest.raises(InvalidLocalPart):
            mint_unit_iri("x", "a b")
        with pytest.raises(InvalidLocalPart):
            mint_unit_iri("", "x")


class TestMaterialize:
    def test_quad_layout(self):
        ds = Dataset()
        unit = identification_unit("Publication_31709", n_data=2)
        materialize(unit, ds)
        quads = extract(ds, unit.iri)
        assert len(quads) == 4  # 1 type + 1 subject + 2 data
        assert {q.graph for q in quads} == {unit.iri}
        subject_quads = [q for q in quads if q.predicate == Iri(PROP_SUBJECT)]
        assert len(subject_quads) == 1
        assert subject_quads[0].object == ex("Publication_31709")

    def test_statement_unit_answers_pattern_query(self):
        ds = Dataset()
        plot, env = ex("grassland_Plot_31499"), ex("grassland_31499")
        unit = SemanticUnit(
            iri=mint_unit_iri("locationStatementUnit", "grassland_Plot_31499"),
            kinds=[Iri(CLASS_STATEMENT_UNIT), Iri(BASE_NS + "semanticunits/locationStatementUnit")],
            subject=plot,
            data_triples=[Triple(plot, ex("locatedIn"), env)],
        )
        materialize(unit, ds)
        query = f"SELECT ?s ?p ?o WHERE {{ GRAPH <{unit.iri.value}> {{ ?s ?p ?o }} }}"
        sol = evaluate(ds, parse_query(query))
        assert len(sol) == 4  # two types + subject + located-in

    def test_compound_association_quads(self):
        ds = Dataset()
        members = [mint_unit_iri("linkStatementUnit", f"Dataset_20907_x{i}") for i in range(6)]
        compound = SemanticUnit(
            iri=mint_unit_iri("linksCompoundUnit", "Dataset_20907"),
            kinds=[Iri(CLASS_COMPOUND_UNIT)],
            subject=ex("Dataset_20907"),
            associations=members,
        )
        materialize(compound, ds)
        assoc_quads = list(ds.match(predicate=Iri(PROP_ASSOC), graph=compound.iri))
        assert len(assoc_quads) == 6
        # association subject is the compound's subject resource
        assert {q.subject for q in assoc_quads} == {ex("Dataset_20907")}
        query = (
            f"SELECT ?links WHERE {{ GRAPH <{compound.iri.value}> "
            f"{{ ?s <{PROP_ASSOC}> ?links . }} }}"
        )
        assert len(evaluate(ds, parse_query(query))) == 6

    def test_invariants_enforced(self):
        ds = Dataset()
        with pytest.raises(InvariantViolation):
            materialize(SemanticUnit(ex("u"), [], ex("s")), ds)
        with pytest.raises(InvariantViolation):
            materialize(SemanticUnit(ex("u"), [Iri(CLASS_STATEMENT_UNIT)], None), ds)

    def test_graph_name_identity(self):
        ds = Dataset()
        unit = identification_unit("Publication_31084")
        materialize(unit, ds)
        assert ds.graphs() == {unit.iri}


class TestAccessors:
    def test_extract_write_read_identity(self):
        ds = Dataset()
        unit = identification_unit("Publication_30000")
        materialize(unit, ds)
        assert extract(ds, unit.iri) == set(ds.match(graph=unit.iri))
        assert extract(ds, ex("nothing")) == set()

    def test_extract_equals_pattern_query_on_random_units(self):
        rng = random.Random(23)
        ds = Dataset()
        units = []
        for i in range(100):
            unit = identification_unit(f"Publication_{i}", n_data=rng.randrange(0, 4))
            materialize(unit, ds)
            units.append(unit)
        for unit in units:
            query = f"SELECT ?s ?p ?o WHERE {{ GRAPH <{unit.iri.value}> {{ ?s ?p ?o }} }}"
            rows = evaluate(ds, parse_query(query))
            got = {(r["s"], r["p"], r["o"]) for r in rows.rows}
            expected = {(q.subject, q.predicate, q.object) for q in extract(ds, unit.iri)}
            assert got == expected

    def test_associations_sorted_and_deduped(self):
        ds = Dataset()
        m1 = mint_unit_iri("linkStatementUnit", "b")
        m2 = mint_unit_iri("linkStatementUnit", "a")
        compound = SemanticUnit(
            iri=mint_unit_iri("linksCompoundUnit", "X"),
            kinds=[Iri(CLASS_COMPOUND_UNIT)],
            subject=ex("X"),
            associations=[m1, m2, m1],
        )
        materialize(compound, ds)
        assert associations(ds, compound.iri) == [m2, m1]

    def test_associations_of_non_compound(self):
        ds = Dataset()
        unit = identification_unit("Publication_31499")
        materialize(unit, ds)
        assert associations(ds, unit.iri) == []

    def test_remove_unit_then_rematerialize(self):
        ds = Dataset()
        unit = identification_unit("Publication_31149")
        materialize(unit, ds)
        assert remove_unit(ds, unit.iri) == 4
        assert ds.count() == 0
        materialize(unit, ds)
        assert len(extract(ds, unit.iri)) == 4


class TestUnitsForSubject:
    def build(self, ds):
        # two statement units about P, one compound over both, one nested compound
        p = ex("Publication_1")
        s1 = SemanticUnit(mint_unit_iri("creatorStatementUnit", "P1_a"), [Iri(CLASS_STATEMENT_UNIT)], p)
        s2 = SemanticUnit(mint_unit_iri("roleStatementUnit", "P1_a"), [Iri(CLASS_STATEMENT_UNIT)], p)
        c1 = SemanticUnit(
            mint_unit_iri("authorsAndRolesCompoundUnit", "P1"),
            [Iri(CLASS_COMPOUND_UNIT)],
            p,
            associations=[s1.iri, s2.iri],
        )
        c2 = SemanticUnit(
            mint_unit_iri("outerCompoundUnit", "P1"),
            [Iri(CLASS_COMPOUND_UNIT)],
            ex("other"),
            associations=[c1.iri],
        )
        for unit in (s1, s2, c1, c2):
            materialize(unit, ds)
        return p, s1, s2, c1, c2

    def test_direct_and_transitive_parents(self):
        ds = Dataset()
        p, s1, s2, c1, c2 = self.build(ds)
        result = units_for_subject(ds, p)
        assert set(result["direct"]) == {s1.iri, s2.iri, c1.iri}
        # c1 holds associations to direct units; c2 reaches them through c1
        assert set(result["parents"]) == {c1.iri, c2.iri}

    def test_no_units(self):
        ds = Dataset()
        result = units_for_subject(ds, ex("lonely"))
        assert result == {"direct": [], "parents": []}

    def test_parents_match_bfs_oracle_on_random_dags(self):
        rng = random.Random(31)
        for _ in range(25):
            ds = Dataset()
            n = rng.randrange(3, 12)
            unit_iris = [mint_unit_iri("statementUnit", f"u{i}") for i in range(n)]
            resource = ex("R")
            direct_idx = {i for i in range(n) if rng.random() < 0.3} or {0}
            edges = set()
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.25:
                        edges.add((j, i))  # j associates i
            for i in range(n):
                unit = SemanticUnit(
                    unit_iris[i],
                    [Iri(CLASS_STATEMENT_UNIT)],
                    resource if i in direct_idx else ex(f"other{i}"),
                    associations=[unit_iris[b] for (a, b) in edges if a == i],
                )
                materialize(unit, ds)
            result = units_for_subject(ds, resource)
            assert set(result["direct"]) == {unit_iris[i] for i in direct_idx}
            # reverse-BFS oracle over association edges
            parents = set()
            frontier = set(direct_idx)
            while frontier:
                nxt = {a for (a, b) in edges if b in frontier and unit_iris[a] not in parents}
                parents.update(unit_iris[a] for a in nxt)
                frontier = nxt
            assert set(result["parents"]) == parents


class TestViews:
    def test_construct_view_strips_graph(self):
        ds = Dataset()
        unit = identification_unit("Publication_31709")
        materialize(unit, ds)
        triples = construct_view(ds, unit.iri)
        assert triples == {q.triple for q in extract(ds, unit.iri)}
        assert construct_view(ds, ex("empty")) == set()

    def test_unit_detail_shape(self):
        ds = Dataset()
        unit = identification_unit("Publication_31709")
        materialize(unit, ds)
        detail = unit_detail(ds, unit.iri)
        assert detail["iri"] == unit.iri.value
        assert detail["subject"] == ex("Publication_31709").value
        assert detail["types"] == [CLASS_IDENTIFICATION_UNIT]
        assert len(detail["triples"]) == 4
        assert unit_detail(ds, ex("missing")) is None

    def test_vis_graph_labels(self):
        ds = Dataset()
        pub = ex("Publication_30000")
        ds.add(Quad(pub, Iri(RDFS_LABEL), Literal("Publication 30000", language="en")))
        unit = SemanticUnit(
            iri=mint_unit_iri("authorsAndRolesCompoundUnit", "Publication_30000"),
            kinds=[Iri(CLASS_COMPOUND_UNIT)],
            subject=pub,
            data_triples=[Triple(pub, ex("creator"), ex("Person_A"))],
        )
        materialize(unit, ds)
        graph = vis_graph(ds, unit.iri)
        labels = {n["id"]: n["label"] for n in graph.nodes}
        assert labels[pub.value] == "Publication 30000"
        # unlabeled IRI falls back to its local name
        assert labels[ex("Person_A").value] == "Person_A"
        assert len(graph.edges) == len(construct_view(ds, unit.iri))

    def test_vis_graph_literal_nodes(self):
        ds = Dataset()
        unit = identification_unit("Publication_31499", n_data=1)
        materialize(unit, ds)
        graph = vis_graph(ds, unit.iri)
        literal_nodes = [n for n in graph.nodes if n["kind"] == "literal"]
        assert len(literal_nodes) == 1
        assert literal_nodes[0]["id"].startswith("lit:")
        # every edge endpoint exists among nodes
        ids = {n["id"] for n in graph.nodes}
        assert all(e["source"] in ids and e["target"] in ids for e in graph.edges)
