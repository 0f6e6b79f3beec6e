from __future__ import annotations

import pytest

from ultragraph import classify as C
from ultragraph.classify import (
    ConditionWitness, Dichotomy, LoopWitness, SupportWitness, UnreachableWitness, condition_L,
    connects_to_loop, dichotomy, is_af, is_cofinal, is_purely_infinite, is_simple,
    is_simple_lattice, is_simple_reach, reaches, reaches_set, verify_witness,
)
from ultragraph.model import Edge, Ultragraph, graph_from_matrix, ultragraph_from_matrix

from corpus import corpus, oracle_cofinal, oracle_condition_L, oracle_has_loop, oracle_simple
from test_symbolic import GRAPHS

FULL2 = ultragraph_from_matrix([[1, 1], [1, 1]])


def test_condition_L_examples(self_loop, descending):
    v = condition_L(self_loop)
    assert v.fails() and v.witness == LoopWitness(("e",), True)
    assert condition_L(descending).holds()
    assert condition_L(FULL2).holds()


def test_every_descending_loop_in_window_uses_e(descending):
    trail = condition_L(descending).detail
    assert trail["loops_examined"] > 0 and "e" in trail["common_edges"]


def test_reaches_examples(descending, one_edge):
    assert reaches(descending, "v0", "v3")
    assert not reaches(one_edge, "w", "v")
    assert reaches(one_edge, "w", "w")


def test_reaches_set_examples(one_edge):
    for g in (one_edge, FULL2):
        for v in g.vertices:
            for w in g.vertices:
                assert reaches_set(g, v, g.vset([w])) == reaches(g, v, w)
            assert reaches_set(g, v, g.vset())
    assert reaches_set(FULL2, "v1", FULL2.vset(["v1", "v2"]))


def test_cofinality_examples(self_loop, two_loops, descending):
    assert is_cofinal(self_loop).holds()
    v = is_cofinal(two_loops)
    assert v.fails() and verify_witness(two_loops, v.witness)
    assert is_cofinal(descending).holds()


def test_simplicity_examples(descending, self_loop, two_sinks, shift):
    assert is_simple_lattice(descending).holds() and is_simple_reach(descending).holds()
    gr = graph_from_matrix(shift)
    v = is_simple_lattice(gr)
    assert v.fails() and v.witness.support == gr.full() - gr.vset(["v0"])
    assert is_simple_lattice(self_loop).fails()
    r = is_simple_reach(two_sinks)
    assert r.fails() and isinstance(r.witness, ConditionWitness) and r.witness.condition == 3
    assert is_simple_reach(FULL2).holds()
    assert is_simple(descending).holds()
    assert is_simple(Ultragraph(["a", "b"], [])).fails()


def test_connects_to_loop_examples(self_loop):
    assert connects_to_loop(self_loop, "v")
    g = Ultragraph(["v", "w"], [Edge("e", "v", ["v", "w"])])
    assert not connects_to_loop(g, "w")
    assert not connects_to_loop(Ultragraph(["v", "w"], [Edge("e", "v", ["w"])]), "w")


def test_af_and_purely_infinite_examples(one_edge, self_loop, descending):
    assert is_af(one_edge).holds()
    assert is_af(self_loop).fails()
    v = is_af(descending)
    assert v.fails() and v.witness.edges == ("e", "g[1]")
    assert is_purely_infinite(FULL2).holds()
    assert is_purely_infinite(one_edge).fails()
    assert is_purely_infinite(descending).holds()


def test_dichotomy_examples(one_edge, two_loops):
    assert dichotomy(FULL2) is Dichotomy.PURELY_INFINITE
    assert dichotomy(one_edge) is Dichotomy.AF
    assert dichotomy(two_loops) is Dichotomy.NOT_SIMPLE


def test_graph_of_infinite_matrix_reach_route_names_condition_3(shift):
    gr = graph_from_matrix(shift)
    r = is_simple_reach(gr)
    assert r.fails() and r.witness.condition == 3
    assert r.witness.inner == UnreachableWitness("v1", "v0")


def test_extension_by_infinite_emitter_is_not_simple(extended):
    v = is_simple(extended)
    assert v.fails()
    assert isinstance(v.witness, SupportWitness)
    assert v.witness.support == extended.full() - extended.vset(["w"])


def test_corpus_matches_oracles():
    for g in corpus()[:400]:
        assert condition_L(g).value == oracle_condition_L(g)
        assert is_cofinal(g).value == oracle_cofinal(g)
        assert is_simple(g).value == oracle_simple(g)
        assert is_af(g).value == (not oracle_has_loop(g))


def test_negative_witnesses_recheck_on_corpus():
    checks = (condition_L, is_cofinal, is_simple_lattice, is_simple_reach, is_af, is_purely_infinite)
    for g in corpus()[:300]:
        for fn in checks:
            v = fn(g)
            if v.fails() and v.witness is not None:
                assert verify_witness(g, v.witness), (fn.__name__, v.witness)


@pytest.mark.parametrize("idx", range(0, 120, 3))
def test_symbolic_verdicts_are_consistent(idx):
    g = GRAPHS[idx]
    for fn in (condition_L, is_cofinal, is_simple_lattice, is_simple_reach, is_af, is_purely_infinite):
        v = fn(g)
        assert v.status in ("decided", "inconclusive")
        if v.fails() and v.witness is not None:
            assert verify_witness(g, v.witness, v.horizon)
    s = is_simple(g)  # raises if the two routes disagree
    if s.holds():
        assert is_af(g).value != is_purely_infinite(g).value


def test_inconclusive_is_reported_not_raised():
    # a tail that keeps climbing without any ray lemma applying stays honest
    for g in GRAPHS:
        v = is_cofinal(g)
        if not v.is_decided:
            assert v.value is None and v.detail.get("reason")
            return
    pytest.skip("no inconclusive instance in this corpus")
