"""Finite ultragraphs, paths, loops and the two matrix constructions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DuplicateId, EmptyRange, UniverseMismatch
from .sets import FiniteUniverse, VertexSet, natural_key, sort_names

DEFAULT_LOOP_BUDGET = 200_000


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    range: VertexSet

    def to_dict(self) -> dict:
        return {"id": self.id, "source": self.source, "range": self.range.to_dict()}


@dataclass(frozen=True, eq=False)
class Ultragraph:
    """A finite ultragraph. Vertices are kept in natural order, edges as given."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    universe: FiniteUniverse = field(init=False, repr=False)
    is_symbolic = False

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple] = ()):
        verts = list(vertices)
        if len(set(verts)) != len(verts):
            raise DuplicateId("duplicate vertex")
        uni = FiniteUniverse(frozenset(verts))
        norm: list[Edge] = []
        ids: set[str] = set()
        for e in edges:
            if not isinstance(e, Edge):
                eid, src, rng = e
                e = Edge(eid, src, rng)
            rng = e.range
            if not isinstance(rng, VertexSet):
                rng = VertexSet.finite(rng)
            if rng.cofinite:
                raise UniverseMismatch("finite ultragraphs have finite ranges")
            rng = rng.with_universe(uni)
            if e.source not in uni:
                raise UniverseMismatch(f"edge {e.id}: source {e.source} undeclared")
            if rng.is_empty():
                raise EmptyRange(f"edge {e.id} has empty range")
            if e.id in ids:
                raise DuplicateId(f"duplicate edge id {e.id}")
            ids.add(e.id)
            norm.append(Edge(e.id, e.source, rng))
        object.__setattr__(self, "vertices", tuple(sort_names(verts)))
        object.__setattr__(self, "edges", tuple(norm))
        object.__setattr__(self, "universe", uni)
        by_src: dict[str, list[Edge]] = {v: [] for v in verts}
        for e in norm:
            by_src[e.source].append(e)
        object.__setattr__(self, "_by_source", {v: tuple(es) for v, es in by_src.items()})
        object.__setattr__(self, "_by_id", {e.id: e for e in norm})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ultragraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    # shared protocol with SymbolicUltragraph
    def full(self) -> VertexSet:
        return VertexSet.full(self.universe)

    def vset(self, items: Iterable[str] = ()) -> VertexSet:
        return VertexSet.finite(items, self.universe)

    def edge(self, eid: str) -> Edge:
        return self._by_id[eid]

    def edges_from(self, v: str) -> tuple[Edge, ...]:
        return self._by_source.get(v, ())

    def emission(self, v: str) -> int:
        return len(self.edges_from(v))

    def out_union(self, k: VertexSet) -> VertexSet:
        """Union of r(e) over edges with s(e) in k."""
        acc: set[str] = set()
        for v in k.support:
            for e in self._by_source.get(v, ()):
                acc |= e.range.support
        return self.vset(acc)

    def sources_hitting(self, b: VertexSet) -> VertexSet:
        """Vertices emitting an edge whose range meets b."""
        target = self.universe.vertices - b.support if b.cofinite else b.support
        return self.vset(e.source for e in self.edges if e.range.support & target)

    def ready_layer(self, k: VertexSet) -> VertexSet:
        """Regular vertices all of whose edge ranges lie in k."""
        inside = k.support
        out = []
        for v in self.vertices:
            es = self._by_source[v]
            if es and all(e.range.support <= inside for e in es):
                out.append(v)
        return self.vset(out)

    def sinks(self) -> VertexSet:
        return self.vset(v for v in self.vertices if not self._by_source[v])

    def infinite_emitters(self) -> VertexSet:
        return self.vset()

    def singular(self) -> VertexSet:
        return self.sinks()

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [e.to_dict() for e in self.edges]}


@dataclass(frozen=True)
class Path:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.edges:
            raise ValueError("paths have positive length")
        for a, b in zip(self.edges, self.edges[1:]):
            if b.source not in a.range:
                raise ValueError(f"{b.id} does not follow {a.id}")

    @property
    def source(self) -> str:
        return self.edges[0].source

    @property
    def range(self) -> VertexSet:
        return self.edges[-1].range

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class Loop:
    path: Path

    def __post_init__(self):
        if self.path.source not in self.path.range:
            raise ValueError("not a loop: s(alpha) is not in r(alpha)")

    @staticmethod
    def of(edges: Sequence[Edge]) -> "Loop":
        return Loop(Path(tuple(edges)))

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.path.edges

    @property
    def ids(self) -> tuple[str, ...]:
        return self.path.ids

    def __len__(self) -> int:
        return len(self.path)

    def sort_key(self) -> tuple:
        return (len(self), tuple(natural_key(i) for i in self.ids))

    def to_dict(self) -> dict:
        return {"type": "loop", "edges": list(self.ids)}


def loop_key(ids: Sequence[str]) -> tuple:
    return (len(ids), tuple(natural_key(i) for i in ids))


def is_loop(edges: Sequence[Edge]) -> bool:
    """Loop predicate checked directly: composable and s(e1) in r(en)."""
    if not edges:
        return False
    for a, b in zip(edges, edges[1:]):
        if b.source not in a.range:
            return False
    return edges[0].source in edges[-1].range


@dataclass(frozen=True)
class Bounded:
    length: int


FIRST_RETURN = "first_return"


def find_loops(g: Ultragraph, mode: str | Bounded = FIRST_RETURN,
               budget: int | None = None) -> list[Loop]:
    """Enumerate loops; ``first_return`` keeps those with pairwise distinct sources."""
    budget = DEFAULT_LOOP_BUDGET if budget is None else budget
    distinct = mode == FIRST_RETURN
    limit = len(g.vertices) if distinct else mode.length
    found: list[tuple[Edge, ...]] = []
    nodes = 0
    for first in g.edges:
        stack: list[tuple[tuple[Edge, ...], frozenset[str]]] = [((first,), frozenset([first.source]))]
        while stack:
            path, used = stack.pop()
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"loop enumeration exceeded {budget} nodes")
            last = path[-1]
            if first.source in last.range:
                found.append(path)
            if len(path) >= limit:
                continue
            for v in last.range.support:
                if distinct and v in used:
                    continue
                for e in g.edges_from(v):
                    stack.append((path + (e,), used | {v}))
    loops = [Loop.of(p) for p in found]
    loops.sort(key=Loop.sort_key)
    return loops


def singular_vertices(g) -> VertexSet:
    return g.singular()


def _check_square(a: Sequence[Sequence[int]]) -> list[list[int]]:
    rows = [list(r) for r in a]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("matrix must be square and nonempty")
    if any(x not in (0, 1) for r in rows for x in r):
        raise ValueError("matrix entries must be 0 or 1")
    return rows


def ultragraph_from_matrix(a):
    """The ultragraph whose edge matrix is ``a``: one vertex and one edge per index."""
    from .symbolic import SymbolicMatrix

    if isinstance(a, SymbolicMatrix):
        return a.ultragraph()
    rows = _check_square(a)
    n = len(rows)
    verts = [f"v{i}" for i in range(1, n + 1)]
    edges = []
    for i, row in enumerate(rows, 1):
        rng = [f"v{j}" for j, x in enumerate(row, 1) if x]
        if not rng:
            raise EmptyRange(f"row {i} of the matrix is zero")
        edges.append(Edge(str(i), f"v{i}", VertexSet.finite(rng)))
    return Ultragraph(verts, edges)


def graph_from_matrix(a):
    """The directed graph with vertex matrix ``a``, as a singleton-range ultragraph."""
    from .symbolic import SymbolicMatrix

    if isinstance(a, SymbolicMatrix):
        return a.graph()
    rows = _check_square(a)
    n = len(rows)
    verts = [f"v{i}" for i in range(1, n + 1)]
    edges = [
        Edge(f"{i}_{j}", f"v{i}", VertexSet.finite([f"v{j}"]))
        for i, row in enumerate(rows, 1)
        for j, x in enumerate(row, 1)
        if x
    ]
    return Ultragraph(verts, edges)


def edge_matrix(g: Ultragraph) -> tuple[tuple[int, ...], ...]:
    """A(e, f) = 1 iff s(f) lies in r(e), indexed by g.edges in order."""
    return tuple(
        tuple(1 if f.source in e.range else 0 for f in g.edges) for e in g.edges
    )


def emission_is_finite(n: float) -> bool:
    return n != math.inf
