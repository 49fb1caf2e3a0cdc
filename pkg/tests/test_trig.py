import itertools
import random

import pytest

from kgsu.model import DEFAULT_GRAPH, BlankNode, Dataset, Iri, Literal, Quad
from kgsu.namespaces import RDF_FIRST, RDF_NIL, RDF_REST, XSD_BOOLEAN, XSD_DECIMAL, XSD_INTEGER
from kgsu.trig import (
    BlankNodeInCanonical,
    NestedGraph,
    ParseError,
    parse_trig,
    parse_turtle,
    serialize_trig,
)

from helpers import random_quad


class TestParseTurtle:
    def test_single_triple(self):
        quads, prefixes = parse_turtle("<http://x/s> <http://x/p> <http://x/o> .")
        assert len(quads) == 1
        assert quads[0] == Quad(Iri("http://x/s"), Iri("http://x/p"), Iri("http://x/o"))
        assert quads[0].graph is DEFAULT_GRAPH

    def test_prefixes_and_lists(self):
        text = """
        @prefix ex: <http://example.com/> .
        PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>
        ex:s a ex:Thing ;
             rdfs:label "hello"@en ;
             ex:num 5, 5.5, true .
        """
        quads, prefixes = parse_turtle(text)
        assert prefixes.namespace("ex") == "http://example.com/"
        objects = {q.object for q in quads if q.predicate == Iri("http://example.com/num")}
        assert objects == {
            Literal("5", datatype=XSD_INTEGER),
            Literal("5.5", datatype=XSD_DECIMAL),
            Literal("true", datatype=XSD_BOOLEAN),
        }
        labels = [q.object for q in quads if q.predicate.value.endswith("label")]
        assert labels == [Literal("hello", language="en")]

    def test_blank_node_property_list(self):
        text = """
        @prefix ex: <http://example.com/> .
        ex:s ex:p [ ex:q "inner" ; ex:r ex:o ] .
        """
        quads, _ = parse_turtle(text)
        assert len(quads) == 3
        bnodes = {q.object for q in quads if isinstance(q.object, BlankNode)}
        assert len(bnodes) == 1

    def test_collection(self):
        quads, _ = parse_turtle('<http://x/s> <http://x/p> ("en" "de") .')
        preds = sorted(q.predicate.value for q in quads)
        assert preds.count(RDF_FIRST) == 2
        assert preds.count(RDF_REST) == 2
        assert any(q.object == Iri(RDF_NIL) for q in quads)

    def test_long_strings_and_escapes(self):
        text = '<http://x/s> <http://x/p> """line1\nsays "hi" twice""" , "tab\\there" .'
        quads, _ = parse_turtle(text)
        lex = {q.object.lexical for q in quads}
        assert 'line1\nsays "hi" twice' in lex
        assert "tab\there" in lex

    def test_base_resolution(self):
        text = '@base <http://example.com/doc> .\n<#frag> <http://x/p> </abs> .'
        quads, _ = parse_turtle(text)
        assert quads[0].subject == Iri("http://example.com/doc#frag")
        assert quads[0].object == Iri("http://example.com/abs")

    def test_missing_object_is_a_parse_error(self):
        with pytest.raises(ParseError) as err:
            parse_turtle("<http://x/s> <http://x/p> .")
        assert err.value.line == 1
        assert err.value.column == 27

    def test_graph_block_rejected_in_turtle(self):
        with pytest.raises(ParseError):
            parse_turtle("<http://x/g> { <http://x/s> <http://x/p> <http://x/o> . }")

    def test_iri_with_space_rejected(self):
        with pytest.raises(ParseError):
            parse_turtle("<http://x/a b> <http://x/p> <http://x/o> .")

    def test_error_position_is_tracked(self):
        with pytest.raises(ParseError) as err:
            parse_turtle("<http://x/s> <http://x/p>\n  %% .")
        assert err.value.line == 2


class TestParseTrig:
    def test_graph_block(self):
        text = """
        <http://x/g> {
            <http://x/s> <http://x/p> <http://x/o> .
            <http://x/s> <http://x/p2> "v" .
        }
        """
        ds, _ = parse_trig(text)
        assert ds.count() == 2
        assert {q.graph for q in ds} == {Iri("http://x/g")}

    def test_graph_keyword_and_default_triples(self):
        text = """
        @prefix ex: <http://x/> .
        ex:s ex:p ex:o .
        GRAPH ex:g1 { ex:s ex:p ex:o1 . }
        ex:g2 { ex:s ex:p ex:o2 . }
        """
        ds, _ = parse_trig(text)
        assert len(ds.graphs()) == 3
        assert ds.count() == 3

    def test_nested_graph_rejected(self):
        text = "<http://x/g> { <http://x/g2> { <http://x/s> <http://x/p> <http://x/o> . } }"
        with pytest.raises(ParseError):
            parse_trig(text)

    def test_unclosed_graph_block(self):
        with pytest.raises(ParseError):
            parse_trig("<http://x/g> { <http://x/s> <http://x/p> <http://x/o> .")


class TestSerialize:
    def test_empty_dataset(self):
        assert serialize_trig(Dataset(), canonical=True) == ""

    def test_canonical_is_deterministic(self):
        rng = random.Random(5)
        quads = [random_quad(rng) for _ in range(60)]
        a = Dataset(quads)
        b = Dataset(reversed(quads))
        assert serialize_trig(a, canonical=True) == serialize_trig(b, canonical=True)

    def test_canonical_rejects_blank_nodes(self):
        ds = Dataset([Quad(BlankNode("b"), Iri("http://x/p"), Literal("v"))])
        with pytest.raises(BlankNodeInCanonical):
            serialize_trig(ds, canonical=True)

    def test_round_trip_random_datasets(self):
        rng = random.Random(11)
        for _ in range(50):
            ds = Dataset(random_quad(rng) for _ in range(rng.randrange(0, 40)))
            for canonical in (True, False):
                text = serialize_trig(ds, canonical=canonical)
                back, _ = parse_trig(text)
                assert set(back) == set(ds)

    def test_pretty_round_trip_with_prefixes(self):
        text = """
        @prefix ex: <http://example.com/> .
        ex:s a ex:Thing ; ex:p "x"@en .
        ex:g { ex:s ex:p ex:o . }
        """
        ds, prefixes = parse_trig(text)
        out = serialize_trig(ds, prefixes=prefixes)
        back, _ = parse_trig(out)
        assert set(back) == set(ds)


def _isomorphic(quads_a, quads_b) -> bool:
    """Brute-force blank-node bijection search, for small instances only."""
    labels_a = sorted({t.label for q in quads_a for t in (q.subject, q.object) if isinstance(t, BlankNode)})
    labels_b = sorted({t.label for q in quads_b for t in (q.subject, q.object) if isinstance(t, BlankNode)})
    if len(labels_a) != len(labels_b) or len(quads_a) != len(quads_b):
        return False

    def rename(quads, mapping):
        out = set()
        for q in quads:
            s = BlankNode(mapping[q.subject.label]) if isinstance(q.subject, BlankNode) else q.subject
            o = BlankNode(mapping[q.object.label]) if isinstance(q.object, BlankNode) else q.object
            out.add(Quad(s, q.predicate, o, q.graph))
        return out

    target = set(quads_b)
    for perm in itertools.permutations(labels_b):
        mapping = dict(zip(labels_a, perm))
        if rename(quads_a, mapping) == target:
            return True
    return False


class TestBlankNodeRoundTrip:
    def test_bnode_documents_round_trip_isomorphically(self):
        docs = [
            '@prefix ex: <http://x/> .\nex:s ex:p [ ex:q "v" ] .',
            '@prefix ex: <http://x/> .\n_:a ex:p _:b . _:b ex:p _:a .',
            '@prefix ex: <http://x/> .\nex:s ex:p [ ex:q [ ex:r ex:o ] ] .',
        ]
        for text in docs:
            ds, prefixes = parse_trig(text)
            out = serialize_trig(ds, prefixes=prefixes)
            back, _ = parse_trig(out)
            assert _isomorphic(list(ds), list(back))
