from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from ultragraph.errors import UniverseMismatch
from ultragraph.sets import FiniteUniverse, TailUniverse, VertexSet, natural_key, sort_names

U = TailUniverse.make([], "v", 0)
WINDOW = [f"v{i}" for i in range(12)]


def fin(*ks):
    return VertexSet.finite([f"v{k}" for k in ks], U)


def cof(*ks):
    return VertexSet.cofinite_of([f"v{k}" for k in ks], U)


def test_natural_order():
    assert sort_names(["v10", "v2", "w", "v1"]) == ["v1", "v2", "v10", "w"]
    assert natural_key("v2") < natural_key("v10")


def test_union_of_finite_sets():
    assert fin(1, 2) | fin(2, 3) == fin(1, 2, 3)


def test_intersection_of_cofinite_sets():
    assert cof(0) & cof(1) == cof(0, 1)


def test_cofinite_minus_finite_pointwise():
    d = cof(0) - fin(3, 4)
    assert d == cof(0, 3, 4)
    for k in range(11):
        assert (f"v{k}" in d) == (k not in (0, 3, 4))


def test_subset_and_finiteness():
    assert fin(1) <= cof(0)
    assert not cof(0) <= fin(1, 2)
    assert fin(1).is_finite() and not cof(0).is_finite()
    assert VertexSet.full(U).is_full() and VertexSet.empty(U).is_empty()


def test_tail_universe_absorbs_exceptional_prefix_names():
    u = TailUniverse.make(["v0", "v1"], "v", 2)
    assert u.start == 0
    assert u.index("v7") == 7 and u.ref(1) == "v1"


def test_mixed_universes_rejected():
    other = FiniteUniverse(frozenset({"a"}))
    with pytest.raises(UniverseMismatch):
        VertexSet.cofinite_of(["a"], other) | cof(0)


def test_string_form():
    assert str(fin(2, 1)) == "{ v1 v2 }"
    assert str(cof(0)) == "~{ v0 }"


small = st.tuples(st.booleans(), st.frozensets(st.integers(0, 9), max_size=6))


def build(p):
    return cof(*p[1]) if p[0] else fin(*p[1])


def model(p):
    inside = set(range(12)) - set(p[1]) if p[0] else set(p[1])
    return {f"v{k}" for k in inside}


@given(small, small)
def test_boolean_operations_match_pointwise_sets(a, b):
    x, y = build(a), build(b)
    ma, mb = model(a), model(b)
    for op, ref in ((x | y, ma | mb), (x & y, ma & mb), (x - y, ma - mb)):
        assert {v for v in WINDOW if v in op} == ref
    # inclusion decided beyond the window too: cofinite is never inside finite
    assert (x <= y) == (ma <= mb and not (a[0] and not b[0]))
    assert x.complement().complement() == x
