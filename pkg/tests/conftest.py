from __future__ import annotations

from pathlib import Path

import pytest

from ultragraph.dsl import parse_matrix, parse_ultragraph
from ultragraph.model import Edge, Ultragraph

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture
def descending():
    return parse_ultragraph(fixture_text("descending.ug"))


@pytest.fixture
def shift():
    return parse_matrix(fixture_text("shift.mat"))


@pytest.fixture
def period3():
    return parse_matrix(fixture_text("period3.mat"))


@pytest.fixture
def extended():
    return parse_ultragraph(fixture_text("extended.ug"))


@pytest.fixture
def one_edge():
    # v -> {w}, w a sink
    return Ultragraph(["v", "w"], [Edge("e", "v", ["w"])])


@pytest.fixture
def self_loop():
    return Ultragraph(["v"], [Edge("e", "v", ["v"])])


@pytest.fixture
def two_loops():
    return Ultragraph(["v", "w"], [Edge("a", "v", ["v"]), Edge("b", "w", ["w"])])


@pytest.fixture
def two_sinks():
    return Ultragraph(["v", "w1", "w2"], [Edge("e1", "v", ["w1"]), Edge("e2", "v", ["w2"])])
