import pytest

from starweight.scenario import parse_scenario
from starweight.stargraph import GraphError, build_star_graph, export_dot, vertex_name
from starweight.words import Word, word_from_tokens


def graph_of(text):
    return build_star_graph(parse_scenario(text).presentation)


SEC3_1111 = """\
factor A noncyclic nontrivial
gens A: a1 a2 a3 a4
indet: t
relator: a1 t a2 t a3 t a4 t
"""

SEC3_2111 = """\
factor A noncyclic nontrivial
gens A: a1 a2 a3 a4
indet: t
relator: a1 t^2 a2 t a3 t a4 t
"""

PX = """\
factor A noncyclic nontrivial
factor B noncyclic nontrivial
gens A: a1 a2 a3 a4
gens B: b1 b2 b3 b4
indet: X
relator: a1 X b1 X^-1 a2 X b2 X^-1 a3 X b3 X^-1 a4 X b4 X^-1
"""


def test_sec3_graph_shape():
    g = graph_of(SEC3_1111)
    assert [vertex_name(v) for v in g.vertices] == ["t", "t^-1"]
    assert len(g.edges) == 4
    assert sorted(e.label_str() for e in g.edges) == ["a1", "a2", "a3", "a4"]
    for e in g.edges:
        assert {vertex_name(e.src), vertex_name(e.dst)} == {"t", "t^-1"}


def test_sec3_identity_edge():
    g = graph_of(SEC3_2111)
    assert len(g.edges) == 5
    labels = sorted(e.label_str() for e in g.edges)
    assert labels == ["1", "a1", "a2", "a3", "a4"]
    identity = [e for e in g.edges if not e.label][0]
    assert identity.factor == "A"


def test_px_two_bouquets():
    g = graph_of(PX)
    assert len(g.edges) == 8
    assert all(e.is_loop for e in g.edges)
    at_x = sorted(e.label_str() for e in g.edges if vertex_name(e.src) == "X")
    at_xinv = sorted(e.label_str() for e in g.edges if vertex_name(e.src) == "X^-1")
    assert at_x == ["b1", "b2", "b3", "b4"]
    assert at_xinv == ["a1", "a2", "a3", "a4"]


def test_edge_count_equals_indeterminate_letters():
    g = graph_of(SEC3_2111)
    rel = parse_scenario(SEC3_2111).presentation.relators[0]
    indet_letters = sum(abs(e) for n, e in rel.letters if n == "t")
    assert len(g.edges) == indet_letters


def test_endpoint_count():
    g = graph_of(PX)
    total = sum(g.degree(v) for v in g.vertices)
    assert total == 2 * len(g.edges)


def test_rotation_invariance():
    base = graph_of(SEC3_2111)
    rotated = graph_of(SEC3_2111.replace("relator: a1 t^2 a2 t a3 t a4 t",
                                         "relator: a3 t a4 t a1 t^2 a2 t"))
    assert base.signature() == rotated.signature()


def test_no_corners_error():
    with pytest.raises(GraphError):
        graph_of("factor A\ngens A: a1 a2\nindet: t\nrelator: a1 a2\n")


def test_resolve_alias():
    g = graph_of(SEC3_2111)
    e = g.resolve("label:a3")
    assert e.label == word_from_tokens(["a3"])
    assert g.resolve(e.edge_id) is e
    assert g.resolve("label:1#0").label == Word()


def test_dot_export_stable():
    g = graph_of(SEC3_1111)
    dot = export_dot(g)
    assert dot == export_dot(g)
    assert dot.startswith("digraph stargraph {")
    assert '"t^-1"' in dot and 'label="a1"' in dot


def test_gamma8_shape():
    text = """\
factor A noncyclic nontrivial
factor B noncyclic nontrivial
gens A: a1 a3
gens B: b1 b2 b3
indet: X Y
relator: Y^-1 X a1^-1 X^-1 b2 X a3 X^-1
relator: b1 Y b3 Y^-1
"""
    g = graph_of(text)
    assert len(g.edges) == 7
    loops = sorted(e.label_str() for e in g.edges if e.is_loop)
    assert loops == ["a1^-1", "a3", "b1", "b2", "b3"]
    nonloops = [e for e in g.edges if not e.is_loop]
    assert sorted(e.label_str() for e in nonloops) == ["1", "1"]
