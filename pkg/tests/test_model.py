from __future__ import annotations

import pytest

from ultragraph.errors import DuplicateId, EmptyRange, UniverseMismatch
from ultragraph.model import (
    Bounded, Edge, FIRST_RETURN, Ultragraph, edge_matrix, find_loops, graph_from_matrix,
    is_loop, singular_vertices, ultragraph_from_matrix,
)


def test_empty_range_rejected():
    with pytest.raises(EmptyRange):
        Ultragraph(["v"], [Edge("e", "v", [])])


def test_duplicate_edge_id_rejected():
    with pytest.raises(DuplicateId):
        Ultragraph(["v"], [Edge("e", "v", ["v"]), Edge("e", "v", ["v"])])


def test_undeclared_range_vertex_rejected():
    with pytest.raises(UniverseMismatch):
        Ultragraph(["v"], [Edge("e", "v", ["x"])])


def test_ultragraph_from_full_two_by_two():
    g = ultragraph_from_matrix([[1, 1], [1, 1]])
    assert g.vertices == ("v1", "v2")
    assert [(e.id, e.source, e.range.members()) for e in g.edges] == [
        ("1", "v1", ["v1", "v2"]), ("2", "v2", ["v1", "v2"])]


def test_ultragraph_from_identity_one():
    g = ultragraph_from_matrix([[1]])
    assert [(e.source, e.range.members()) for e in g.edges] == [("v1", ["v1"])]


def test_ultragraph_of_infinite_matrix_is_descending(shift, descending):
    g = ultragraph_from_matrix(shift)
    # same vertex names; edges renamed 0 -> f, 1 -> e, n+1 -> g[n]
    assert g.universe == descending.universe
    for n in range(1, 9):
        assert g.edge(str(n + 1)).range == descending.edge(f"g[{n}]").range
        assert g.edge(str(n + 1)).source == descending.edge(f"g[{n}]").source
    assert g.edge("0") == Edge("0", "v0", descending.edge("f").range)
    assert g.edge("1") == Edge("1", "v1", descending.edge("e").range)


def test_graph_from_matrix_with_sink():
    g = graph_from_matrix([[0, 1], [0, 0]])
    assert [(e.source, e.range.members()) for e in g.edges] == [("v1", ["v2"])]
    assert singular_vertices(g).members() == ["v2"]


def test_graph_from_full_matrix_has_four_singleton_edges():
    g = graph_from_matrix([[1, 1], [1, 1]])
    assert len(g.edges) == 4 and all(len(e.range) == 1 for e in g.edges)


def test_graph_of_infinite_matrix_has_infinite_emitter(shift):
    g = graph_from_matrix(shift)
    assert "v0" in g.infinite_emitters()
    assert "v1" in g.infinite_emitters()
    assert "v2" not in g.infinite_emitters()


def test_edge_matrix(one_edge):
    assert edge_matrix(Ultragraph(["v", "w"], [Edge("e", "v", ["w"])])) == ((0,),)
    assert edge_matrix(ultragraph_from_matrix([[1, 1], [1, 1]])) == ((1, 1), (1, 1))


def test_find_loops_small_cases(self_loop, one_edge):
    assert [l.ids for l in find_loops(self_loop)] == [("e",)]
    assert find_loops(one_edge) == []


def test_first_return_loops_of_full_matrix():
    g = ultragraph_from_matrix([[1, 1], [1, 1]])
    assert [l.ids for l in find_loops(g, FIRST_RETURN)] == [("1",), ("2",), ("1", "2"), ("2", "1")]
    assert all(is_loop(l.edges) for l in find_loops(g, Bounded(3)))


def test_singular_vertices(one_edge, extended):
    assert singular_vertices(one_edge).members() == ["w"]
    assert singular_vertices(ultragraph_from_matrix([[1, 1], [1, 1]])).is_empty()
    s = singular_vertices(extended)
    assert s.is_finite() and s.members() == ["w"]
