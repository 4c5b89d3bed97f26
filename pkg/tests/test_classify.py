import json

import pytest

from affcox.classify import (ClassifiedType, affine_templates, all_templates, classify_diagram,
                             labeled_isomorphic, parse_type_name, template_graph)
from affcox.coxeter import INF, CoxeterGraph, gram_kind


def graph(n, edges):
    return CoxeterGraph(tuple(f"v{i}" for i in range(n)), tuple(((i, j), m) for i, j, m in edges))


def test_infinite_dihedral():
    t = classify_diagram(graph(2, [(0, 1, INF)]))
    assert t.name == "A~1" and t.affine
    assert t.describe() == "affine A~1 (infinite dihedral)"


def test_triangle_is_affine_a2():
    g = graph(3, [(0, 1, 3), (1, 2, 3), (0, 2, 3)])
    assert classify_diagram(g).name == "A~2"
    assert gram_kind(g) == "affine"


def test_path_44_is_affine_c2():
    g = graph(3, [(0, 1, 4), (1, 2, 4)])
    assert classify_diagram(g).name == "C~2"
    assert gram_kind(g) == "affine"


@pytest.mark.parametrize("ctype,graph_", all_templates(10), ids=lambda x: getattr(x, "name", ""))
def test_templates_agree_with_gram_form(ctype, graph_):
    assert gram_kind(graph_) == ctype.kind
    assert classify_diagram(graph_) == ctype


def test_vertex_order_does_not_matter():
    for ctype, g in affine_templates(6):
        perm = list(range(g.rank))[::-1]
        relabeled = CoxeterGraph(tuple(g.vertices[p] for p in perm),
                                 tuple(((perm.index(i), perm.index(j)), m) for (i, j), m in g.labels))
        assert labeled_isomorphic(g, relabeled)
        assert classify_diagram(relabeled) == ctype


def test_reducible_input():
    g = graph(5, [(0, 1, INF), (2, 3, 3), (3, 4, 3), (2, 4, 3)])
    t = classify_diagram(g)
    assert t.kind == "affine" and len(t.components) == 2
    assert {c.name for c in t.components} == {"A~1", "A~2"}
    data = t.to_json()
    assert data["kind"] == "affine" and len(data["components"]) == 2
    mixed = classify_diagram(graph(3, [(0, 1, INF)]))
    assert mixed.kind == "other"


def test_unknown_diagram_is_other():
    g = graph(3, [(0, 1, 5), (1, 2, 5)])
    assert classify_diagram(g).kind == "other"
    assert classify_diagram(g).name == "other"


def test_rank_two_dihedral_names():
    assert classify_diagram(graph(2, [(0, 1, 5)])).name == "I2(5)"
    assert classify_diagram(graph(2, [(0, 1, 6)])).name == "G2"


def test_type_names_round_trip():
    for name in ["A~1", "A~4", "B~3", "C~2", "C~5", "D~4", "G~2", "F~4", "E~6", "A3", "C3", "E8"]:
        t = parse_type_name(name)
        assert t.name == name
    assert parse_type_name("B~2") == parse_type_name("C~2")
    with pytest.raises(ValueError):
        parse_type_name("Q~3")
    with pytest.raises(ValueError):
        parse_type_name("G~5")


def test_template_graph_round_trip():
    for name in ["A~1", "A~3", "B~4", "C~2", "D~5", "G~2", "F~4", "E~7"]:
        t = parse_type_name(name)
        assert classify_diagram(template_graph(t)) == t


def test_json_shape():
    data = classify_diagram(graph(3, [(0, 1, 3), (1, 2, 6)])).to_json()
    assert json.loads(json.dumps(data)) == {"kind": "affine", "family": "G~2", "rank": 2}


def test_classified_type_is_value():
    assert ClassifiedType("affine", "A", 2, True) == parse_type_name("A~2")
