from __future__ import annotations

from itertools import combinations

import pytest

from ultragraph.errors import NotHereditary, NotSaturatedHereditary
from ultragraph.ideals import (
    backward_closure, downstream_restriction, enumerate_saturated_hereditary, hereditary_closure,
    is_hereditary, is_saturated, quotient_ultragraph, saturate, saturated_hereditary_hull,
)
from ultragraph.model import Edge, Ultragraph, graph_from_matrix, ultragraph_from_matrix

from corpus import corpus, oracle_hereditary, oracle_saturated, oracle_saturated_hereditary


def test_hereditary_single_edge(one_edge):
    assert is_hereditary(one_edge, one_edge.vset(["w"])).holds
    c = is_hereditary(one_edge, one_edge.vset(["v"]))
    assert not c.holds and c.witness.id == "e"


def test_hereditary_cofinite_support_in_descending(descending):
    k = descending.full() - descending.vset(["v0"])
    assert is_hereditary(descending, k).holds


def test_saturated_single_edge(one_edge):
    c = is_saturated(one_edge, one_edge.vset(["w"]))
    assert not c.holds and c.witness == "v"
    assert is_saturated(one_edge, one_edge.vset()).holds
    assert is_saturated(one_edge, one_edge.full()).holds
    with pytest.raises(NotHereditary):
        is_saturated(one_edge, one_edge.vset(["v"]))


def test_saturate_single_edge(one_edge):
    t = saturate(one_edge, one_edge.vset(["w"]))
    assert t.final.support.members() == ["v", "w"] and len(t.layers) == 1
    assert saturate(one_edge, one_edge.vset()).final.support.is_empty()


def test_hereditary_closure_single_edge(one_edge):
    assert hereditary_closure(one_edge, one_edge.vset(["v"])).members() == ["v", "w"]
    assert hereditary_closure(one_edge, one_edge.vset(["w"])).members() == ["w"]


def test_descending_closure_then_saturation(descending):
    k = hereditary_closure(descending, descending.vset(["v1"]))
    assert k == descending.full() - descending.vset(["v0"])
    t = saturate(descending, k)
    assert t.final.support.is_full()
    assert t.layers == (descending.vset(["v0"]),)
    with pytest.raises(NotHereditary):
        saturate(descending, descending.vset(["v1"]))


def test_backward_closure_descending(descending):
    assert backward_closure(descending, descending.vset(["v5"])).is_full()


def test_enumerate_full_matrix():
    g = ultragraph_from_matrix([[1, 1], [1, 1]])
    assert [h.support.members() for h in enumerate_saturated_hereditary(g)] == [[], ["v1", "v2"]]


def test_enumerate_two_loops(two_loops):
    got = [h.support.members() for h in enumerate_saturated_hereditary(two_loops)]
    assert got == [[], ["v"], ["w"], ["v", "w"]]


def test_enumerate_two_sinks_includes_each_sink(two_sinks):
    got = [h.support.members() for h in enumerate_saturated_hereditary(two_sinks)]
    assert ["w1"] in got and ["w2"] in got


def test_enumeration_matches_brute_force_on_corpus():
    for g in corpus()[:300]:
        got = {frozenset(h.support.support) for h in enumerate_saturated_hereditary(g)}
        assert got == set(oracle_saturated_hereditary(g))


def test_closures_match_definitions_on_corpus():
    for g in corpus()[:200]:
        for v in g.vertices:
            k = hereditary_closure(g, g.vset([v]))
            least = set(g.vertices)
            for size in range(len(g.vertices) + 1):
                for c in combinations(g.vertices, size):
                    if v in c and oracle_hereditary(g, set(c)):
                        least &= set(c)
            assert set(k.support) == least
            hull = saturated_hereditary_hull(g, g.vset([v]))
            assert oracle_saturated(g, set(hull.support)) and oracle_hereditary(g, set(hull.support))


def test_quotient_of_graph_of_infinite_matrix(shift):
    g = graph_from_matrix(shift)
    k = g.full() - g.vset(["v0"])
    q = quotient_ultragraph(g, k)
    assert q.graph.vertices == ("v0",) and q.graph.edges == ()


def test_quotient_trivial_cases(one_edge, extended):
    assert quotient_ultragraph(one_edge, one_edge.vset()).graph == one_edge
    q = quotient_ultragraph(one_edge, one_edge.full())
    assert q.degenerate and q.graph.vertices == ()
    with pytest.raises(NotSaturatedHereditary):
        quotient_ultragraph(one_edge, one_edge.vset(["w"]))
    q = quotient_ultragraph(extended, extended.full() - extended.vset(["w"]))
    assert q.graph.vertices == ("w",) and q.graph.edges == ()


def test_downstream_restriction(one_edge, two_loops):
    assert downstream_restriction(one_edge, "v") == one_edge
    assert downstream_restriction(one_edge, "w") == Ultragraph(["w"], [])
    assert downstream_restriction(two_loops, "v") == Ultragraph(["v"], [Edge("a", "v", ["v"])])
