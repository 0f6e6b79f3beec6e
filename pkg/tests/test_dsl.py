from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from ultragraph.dsl import build, document_of, parse, parse_matrix, parse_ultragraph, render, render_matrix
from ultragraph.errors import DuplicateId, EmptyRange, ParseError, UndeclaredVertex
from ultragraph.symbolic import SymbolicMatrix, SymbolicUltragraph

from conftest import fixture_text
from corpus import corpus

DESCENDING_TEXT = ("vertices v0 v1\ntail v[n] for n >= 2\nedge e : v1 -> ~{ v0 v1 }\n"
        "edge f : v0 -> ~{ v0 }\nfamily g[n] for n >= 1 : v[n+1] -> { v[n] }")


def test_two_vertices_one_edge():
    doc = parse("vertices v w\nedge e : v -> { w }")
    assert doc.vertices == ("v", "w") and len(doc.edges) == 1
    g = build(doc)
    assert g.edge("e").range.members() == ["w"]


def test_descending_document(descending):
    g = parse_ultragraph(DESCENDING_TEXT)
    assert isinstance(g, SymbolicUltragraph)
    assert g.describe() == descending.describe()
    assert g.edge("g[3]").source == "v4"


def test_empty_range_is_detected_before_names():
    with pytest.raises(EmptyRange) as err:
        parse("edge e : v -> { }")
    assert (err.value.span.line, err.value.span.col) == (1, 15)


@pytest.mark.parametrize("text,exc,line,col", [
    ("vertices v\nedge e : v -> { w }", UndeclaredVertex, 2, 17),
    ("vertices v v", DuplicateId, 1, 12),
    ("vertices v\nedge e : v -> { v }\nedge e : v -> { v }", DuplicateId, 3, 6),
    ("vertices v\nedge e v -> { v }", ParseError, 2, 8),
    ("vertices v\nedge e : v -> { v", ParseError, 2, 18),
    ("vertices v\nbogus", ParseError, 2, 1),
    ("vertices v\nedge e : v => { v }", ParseError, 2, 12),
    ("vertices v\nfamily g[n] for n >= 0 : v[n] -> { v[n] }", ParseError, 2, 1),
    ("tail v[n] for n >= 2\nfamily g[n] for n >= 0 : v[n] -> { v[n] }", UndeclaredVertex, 2, 26),
    ("tail v[n] for n >= 0\nfamily g[n] for n >= 0 : v[m] -> { v[n] }", ParseError, 2, 28),
])
def test_diagnostics_carry_positions(text, exc, line, col):
    with pytest.raises(exc) as err:
        parse(text)
    assert (err.value.span.line, err.value.span.col) == (line, col)


def test_comments_and_blank_lines_ignored():
    doc = parse("# header\n\nvertices a   # trailing\nedge x : a -> { a }\n")
    assert doc.vertices == ("a",)


def test_finite_cofinite_range_is_complement_within_vertices():
    g = parse_ultragraph("vertices a b c\nedge x : a -> ~{ a }")
    assert g.edge("x").range.members() == ["b", "c"]
    with pytest.raises(EmptyRange):
        parse_ultragraph("vertices a\nedge x : a -> ~{ a }")


@pytest.mark.parametrize("name", ["descending.ug", "extended.ug"])
def test_render_roundtrip_fixtures(name):
    doc = parse(fixture_text(name))
    assert parse(render(doc)) == doc
    assert render(parse(render(doc))) == render(doc)


def test_render_roundtrip_on_corpus():
    for g in corpus()[:200]:
        doc = document_of(g)
        again = parse(render(doc))
        assert again == doc
        assert build(again) == g


names = st.sampled_from(["a", "b", "c", "v1", "v2"])


@given(st.lists(st.tuples(names, st.sets(names, min_size=1), st.booleans()), max_size=6))
def test_render_roundtrip_generated(edges):
    lines = ["vertices a b c v1 v2"]
    for i, (src, rng, cof) in enumerate(edges):
        body = " ".join(sorted(rng))
        lines.append(f"edge x{i} : {src} -> {'~' if cof else ''}{{ {body} }}")
    doc = parse("\n".join(lines))
    assert parse(render(doc)) == doc


def test_dense_matrix():
    assert parse_matrix("1 1\n1 1\n") == [[1, 1], [1, 1]]
    assert parse_matrix("1, 0\n0, 1") == [[1, 0], [0, 1]]
    with pytest.raises(ParseError):
        parse_matrix("1 1\n1")
    with pytest.raises(ParseError):
        parse_matrix("1 2\n1 1")


@pytest.mark.parametrize("name", ["shift.mat", "period3.mat"])
def test_symbolic_matrix_roundtrip(name):
    m = parse_matrix(fixture_text(name))
    assert isinstance(m, SymbolicMatrix)
    assert parse_matrix(render_matrix(m)) == m


def test_symbolic_matrix_rows(period3):
    assert period3.row(1) == (True, frozenset({2, 3}))
    assert period3.row(7) == (False, frozenset({4, 7}))
