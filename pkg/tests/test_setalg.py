from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest

from ultragraph.errors import HasSinks, NoUnit
from ultragraph.model import Edge, Ultragraph, ultragraph_from_matrix
from ultragraph.setalg import (
    FiniteUniverse, ProjectionCombo, VertexSet, evaluate, generate_lattice, orthogonalize,
    partition_identity, regular_ideal_support,
)

U = FiniteUniverse(frozenset({"1", "2", "3"}))


def s(*xs):
    return VertexSet.finite(xs, U)


def values(g):
    return {frozenset(el.value.support) for el in generate_lattice(g)}


def test_lattice_with_all_singletons_is_power_set():
    g = Ultragraph(["a", "b", "c"], [Edge("e", "a", ["a", "b"])])
    subsets = {frozenset(c) for k in range(4) for c in combinations("abc", k)}
    assert values(g) == subsets


def test_lattice_of_single_edge():
    g = Ultragraph(["v", "w"], [Edge("e", "v", ["w"])])
    assert values(g) == {frozenset(), frozenset("v"), frozenset("w"), frozenset("vw")}


def test_lattice_decompositions_recompose():
    g = Ultragraph(["a", "b", "c"], [Edge("e", "a", ["a", "b"]), Edge("f", "b", ["b", "c"])])
    els = generate_lattice(g)
    assert len(els) == 8
    for el in els:
        assert el.recompose(g) == el.value
    ab = next(el for el in els if el.value.members() == ["a", "b"])
    assert ab.decomposition == (("e",),) and ab.finite_part.is_empty()


def test_orthogonalize_single_term():
    atoms = orthogonalize(ProjectionCombo.of([(3, s("1", "2"))]))
    assert [(a.B, a.C.is_empty(), a.coefficient) for a in atoms] == [(s("1", "2"), True, 3)]


def test_orthogonalize_two_overlapping_sets():
    a, b = s("1", "2"), s("2", "3")
    atoms = orthogonalize(ProjectionCombo.of([(1, a), (1, b)]))
    got = {(frozenset(x.set().support), x.coefficient) for x in atoms}
    assert got == {(frozenset({"1"}), 1), (frozenset({"3"}), 1), (frozenset({"2"}), 2)}


def test_cancellation_gives_no_atoms():
    a = s("1")
    assert orthogonalize(ProjectionCombo.of([(1, a), (-1, a)])) == []


def test_partition_identity_single_set():
    atoms = partition_identity([s("1")])
    assert [a.set().members() for a in atoms] == [["2", "3"], ["1"]]


def test_partition_identity_equal_sets():
    u = FiniteUniverse(frozenset({"1", "2"}))
    a = VertexSet.finite(["1"], u)
    nonempty = [x.set().members() for x in partition_identity([a, a]) if not x.set().is_empty()]
    assert nonempty == [["2"], ["1"]]


def test_partition_identity_empty_family_is_unit():
    atoms = partition_identity([], U)
    assert len(atoms) == 1 and atoms[0].set().is_full()
    with pytest.raises(NoUnit):
        partition_identity([VertexSet.finite(["x"])])


def test_evaluate():
    assert evaluate(ProjectionCombo.of([(2, s("1"))]), "1") == 2
    for v in "123":
        assert evaluate(partition_identity([s("1"), s("1", "3")]), v) == Fraction(1)


def test_regular_ideal_support(one_edge, extended):
    g = ultragraph_from_matrix([[1, 1], [1, 1]])
    assert regular_ideal_support(g).is_full()
    r = regular_ideal_support(extended)
    assert r == extended.full() - extended.vset(["w"])
    with pytest.raises(HasSinks) as err:
        regular_ideal_support(one_edge)
    assert err.value.sinks == ("w",)
