"""Symbolic infinite ultragraphs and {0,1} matrices with eventually affine rows.

Tail vertices are ``prefix + str(k)`` for ``k >= start``. Edges come either as a
finite list of concrete edges (ranges finite or cofinite) or as families

    g[n] for n >= m :  v[n+a]  ->  { v[n+d] : d in offsets } | fixed

where the source may instead be a fixed vertex (an infinite emitter).

Every exact query is computed by tabulating a per-vertex predicate on an
explicit region of tail indices and evaluating it once beyond it: past the
"generic" index every vertex looks the same, so the predicate is constant there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import DuplicateId, EmptyRange, InternalDisagreement, Unsupported, UniverseMismatch
from .model import Edge, Ultragraph
from .sets import TailUniverse, VertexSet, sort_names


@dataclass(frozen=True)
class EdgeFamily:
    id: str
    start: int
    offsets: tuple[int, ...]
    fixed: VertexSet
    source_offset: int | None = 0
    fixed_source: str | None = None
    # ("bracket",) -> "id[n]"; ("index", s) -> str(n+s); ("pair", l, r) -> "l_r"
    naming: tuple = ("bracket",)

    @property
    def is_fixed_source(self) -> bool:
        return self.fixed_source is not None

    def instance_id(self, n: int) -> str:
        kind = self.naming[0]
        if kind == "bracket":
            return f"{self.id}[{n}]"
        if kind == "index":
            return str(n + self.naming[1])
        left, right = self.naming[1], self.naming[2]
        lt = left if isinstance(left, str) else str(n + left)
        rt = right if isinstance(right, str) else str(n + right)
        return f"{lt}_{rt}"

    def source_name(self, u: TailUniverse, n: int) -> str:
        if self.fixed_source is not None:
            return self.fixed_source
        return u.ref(n + self.source_offset)

    def range_at(self, u: TailUniverse, n: int) -> VertexSet:
        return self.fixed | VertexSet.finite((u.ref(n + d) for d in self.offsets), u)

    def instance(self, u: TailUniverse, n: int) -> Edge:
        return Edge(self.instance_id(n), self.source_name(u, n), self.range_at(u, n))


@dataclass(frozen=True)
class Window:
    """Finite truncation of a symbolic ultragraph to indices below ``size``."""

    size: int
    graph: Ultragraph
    real: dict = field(compare=False, repr=False)

    def real_edge(self, eid: str) -> Edge:
        return self.real[eid]


class SymbolicUltragraph:
    is_symbolic = True

    def __init__(self, exceptional: Iterable[str], prefix: str, tail_start: int,
                 edges: Iterable[Edge] = (), families: Iterable[EdgeFamily] = ()):
        exceptional = list(exceptional)
        if len(set(exceptional)) != len(exceptional):
            raise DuplicateId("duplicate vertex")
        for v in exceptional:
            rest = v[len(prefix):]
            if v.startswith(prefix) and rest.isdigit() and int(rest) >= tail_start:
                raise DuplicateId(f"{v} collides with a tail vertex")
        u = TailUniverse.make(exceptional, prefix, tail_start)
        self.universe = u
        self.declared_exceptional = tuple(exceptional)
        self.declared_start = tail_start
        self.prefix = prefix
        ids: set[str] = set()
        norm: list[Edge] = []
        for e in edges:
            if e.source not in u:
                raise UniverseMismatch(f"edge {e.id}: source {e.source} undeclared")
            rng = e.range.with_universe(u) if e.range.universe is None else e.range
            if rng.universe != u:
                raise UniverseMismatch(f"edge {e.id}: range in another universe")
            if rng.is_empty():
                raise EmptyRange(f"edge {e.id} has empty range")
            if e.id in ids:
                raise DuplicateId(f"duplicate edge id {e.id}")
            ids.add(e.id)
            norm.append(Edge(e.id, e.source, rng))
        fams: list[EdgeFamily] = []
        for f in families:
            fixed = f.fixed.with_universe(u) if f.fixed.universe is None else f.fixed
            f = EdgeFamily(f.id, f.start, tuple(f.offsets), fixed, None if f.fixed_source else f.source_offset,
                           f.fixed_source, f.naming)
            self._check_family(f)
            if ("fam", f.id) in ids:
                raise DuplicateId(f"duplicate family id {f.id}")
            ids.add(("fam", f.id))
            fams.append(f)
        self.edges = tuple(norm)
        self.families = tuple(fams)
        self.tail_families = tuple(f for f in fams if not f.is_fixed_source)
        self._conc_by_source: dict[str, list[Edge]] = {}
        for e in norm:
            self._conc_by_source.setdefault(e.source, []).append(e)
        self._exc_index = {}
        for v in u.exceptional:
            if v.startswith(prefix) and v[len(prefix):].isdigit():
                self._exc_index[v] = int(v[len(prefix):])
        self.span = max(
            [abs(d - f.source_offset) for f in self.tail_families for d in f.offsets] + [0]
        )
        self.explicit_max = self._explicit_max()
        self.generic_start = self.explicit_max + self.span + 1

    # ---- construction helpers
    def _check_family(self, f: EdgeFamily) -> None:
        u = self.universe
        if not f.offsets and f.fixed.is_empty():
            raise EmptyRange(f"family {f.id} has empty ranges")
        if f.fixed_source is not None and f.fixed_source not in u:
            raise UniverseMismatch(f"family {f.id}: source {f.fixed_source} undeclared")
        shifts = list(f.offsets) + ([] if f.is_fixed_source else [f.source_offset])
        for s in shifts:
            for k in range(f.start + s, u.start):
                if u.ref(k) is None:
                    raise UniverseMismatch(f"family {f.id}: reference {u.prefix}[{k}] undeclared")

    def _explicit_max(self) -> int:
        u = self.universe
        ks = [u.start]

        def note(vs: VertexSet):
            m = vs.max_tail_index()
            if m is not None:
                ks.append(m)

        for e in self.edges:
            note(VertexSet.finite([e.source], u))
            note(e.range)
        for f in self.families:
            note(f.fixed)
            if f.fixed_source:
                note(VertexSet.finite([f.fixed_source], u))
            else:
                ks.append(f.start + f.source_offset)
            ks.extend(f.start + d for d in f.offsets)
        return max(ks)

    # ---- basic protocol
    def full(self) -> VertexSet:
        return VertexSet.full(self.universe)

    def vset(self, items: Iterable[str] = ()) -> VertexSet:
        return VertexSet.finite(items, self.universe)

    def refidx(self, v: str) -> int | None:
        """Index k such that v is referenced as prefix[k], if any."""
        k = self.universe.index(v)
        return k if k is not None else self._exc_index.get(v)

    def name(self, k: int) -> str:
        return self.universe.name(k)

    def explicit_vertices(self, upto: int) -> list[str]:
        """Exceptional vertices followed by tail vertices with index < upto."""
        u = self.universe
        return u.ordered_exceptional() + [u.name(k) for k in range(u.start, upto)]

    def fixed_source_families(self, v: str) -> list[EdgeFamily]:
        return [f for f in self.families if f.fixed_source == v]

    def emission(self, v: str) -> float:
        if self.fixed_source_families(v):
            return math.inf
        n = len(self._conc_by_source.get(v, ()))
        k = self.refidx(v)
        if k is not None:
            n += sum(1 for f in self.tail_families if k - f.source_offset >= f.start)
        return n

    def edges_from(self, v: str) -> tuple[Edge, ...]:
        if self.fixed_source_families(v):
            raise Unsupported(f"{v} is an infinite emitter")
        out = list(self._conc_by_source.get(v, ()))
        k = self.refidx(v)
        if k is not None:
            for f in self.tail_families:
                n = k - f.source_offset
                if n >= f.start:
                    out.append(f.instance(self.universe, n))
        return tuple(out)

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        for f in self.families:
            n = self._parse_instance(f, eid)
            if n is not None:
                return f.instance(self.universe, n)
        raise KeyError(eid)

    def _parse_instance(self, f: EdgeFamily, eid: str) -> int | None:
        kind = f.naming[0]
        try:
            if kind == "bracket":
                if not (eid.startswith(f.id + "[") and eid.endswith("]")):
                    return None
                n = int(eid[len(f.id) + 1:-1])
            elif kind == "index":
                n = int(eid) - f.naming[1]
            else:
                left, _, right = eid.partition("_")
                l_, r_ = f.naming[1], f.naming[2]
                cands = []
                if not isinstance(l_, str):
                    cands.append(int(left) - l_)
                elif left != l_:
                    return None
                if not isinstance(r_, str):
                    cands.append(int(right) - r_)
                elif right != r_:
                    return None
                if len(set(cands)) != 1:
                    return None
                n = cands[0]
        except ValueError:
            return None
        if n < f.start or f.instance_id(n) != eid:
            return None
        return n

    # ---- tabulation
    def bound_for(self, *sets: VertexSet) -> int:
        m = self.generic_start
        for s in sets:
            k = s.max_tail_index()
            if k is not None:
                m = max(m, k + self.span + 1)
        return m + self.span + 1

    def tabulate(self, pred: Callable[[str], bool], bound: int) -> VertexSet:
        u = self.universe
        inside = [v for v in self.explicit_vertices(bound) if pred(v)]
        tail = pred(u.name(bound))
        for k in range(bound + 1, bound + self.span + 3):
            if pred(u.name(k)) != tail:
                raise InternalDisagreement("predicate not uniform past the generic bound")
        if not tail:
            return self.vset(inside)
        explicit = set(self.explicit_vertices(bound))
        return VertexSet.cofinite_of(explicit - set(inside), u)

    # ---- set-valued queries
    def _any_source_in(self, f: EdgeFamily, k: VertexSet) -> bool:
        if f.fixed_source is not None:
            return f.fixed_source in k
        if k.cofinite:
            return True
        for v in k.support:
            j = self.refidx(v)
            if j is not None and j - f.source_offset >= f.start:
                return True
        return False

    def out_union(self, k: VertexSet) -> VertexSet:
        """Union of r(e) over all edges e with s(e) in k."""
        k = k.with_universe(self.universe) if k.universe is None else k
        acc = self.vset()
        for e in self.edges:
            if e.source in k:
                acc = acc | e.range
        live = [f for f in self.families if self._any_source_in(f, k)]
        for f in live:
            acc = acc | f.fixed
        u = self.universe

        def pred(y: str) -> bool:
            j = self.refidx(y)
            if j is None:
                return False
            for f in live:
                for d in f.offsets:
                    n = j - d
                    if n < f.start:
                        continue
                    if f.fixed_source is not None or u.ref(n + f.source_offset) in k:
                        return True
            return False

        return acc | self.tabulate(pred, self.bound_for(k))

    def sources_hitting(self, b: VertexSet) -> VertexSet:
        """Vertices emitting some edge whose range meets b."""
        b = b.with_universe(self.universe) if b.universe is None else b
        u = self.universe

        def hits_offsets(f: EdgeFamily) -> bool:
            if not f.offsets:
                return False
            if b.cofinite:
                return True
            for v in b.support:
                j = self.refidx(v)
                if j is not None and any(j - d >= f.start for d in f.offsets):
                    return True
            return False

        def pred(x: str) -> bool:
            for e in self._conc_by_source.get(x, ()):
                if not (e.range & b).is_empty():
                    return True
            for f in self.fixed_source_families(x):
                if not (f.fixed & b).is_empty() or hits_offsets(f):
                    return True
            k = self.refidx(x)
            if k is not None:
                for f in self.tail_families:
                    n = k - f.source_offset
                    if n >= f.start and not (f.range_at(u, n) & b).is_empty():
                        return True
            return False

        return self.tabulate(pred, self.bound_for(b))

    def ready_layer(self, k: VertexSet) -> VertexSet:
        """Regular vertices all of whose edge ranges lie in k."""
        k = k.with_universe(self.universe) if k.universe is None else k

        def pred(x: str) -> bool:
            em = self.emission(x)
            if em == 0 or em == math.inf:
                return False
            return all(e.range <= k for e in self.edges_from(x))

        return self.tabulate(pred, self.bound_for(k))

    def sinks(self) -> VertexSet:
        return self.tabulate(lambda x: self.emission(x) == 0, self.bound_for())

    def infinite_emitters(self) -> VertexSet:
        return self.vset(f.fixed_source for f in self.families if f.fixed_source)

    def singular(self) -> VertexSet:
        return self.sinks() | self.infinite_emitters()

    # ---- ray lemmas used by closure computations on finite sets
    def _band(self, k: VertexSet, width: int, lo: int) -> int | None:
        """Least t >= lo with prefix[t .. t+width-1] all in the finite set k."""
        idx = sorted(j for j in (self.universe.index(v) for v in k.support) if j is not None and j >= lo)
        run_start, prev = None, None
        for j in idx:
            if prev is None or j != prev + 1:
                run_start = j
            prev = j
            if j - run_start + 1 >= width:
                return run_start
        return None

    def forward_ray(self, k: VertexSet) -> int | None:
        """t such that [t, inf) lies in the hereditary closure of finite k."""
        best = None
        for f in self.tail_families:
            for d in f.offsets:
                c = d - f.source_offset
                if c > 0:
                    t = self._band(k, c, self.generic_start)
                    if t is not None and (best is None or t < best):
                        best = t
        return best

    def saturation_ray(self, k: VertexSet) -> int | None:
        """t such that [t, inf) lies in the saturation of finite k."""
        if not self.tail_families:
            return None
        width = 0
        for f in self.tail_families:
            if not f.fixed <= k:
                return None
            for d in f.offsets:
                if d - f.source_offset >= 0:
                    return None
                width = max(width, f.source_offset - d)
        if width == 0:
            return None
        return self._band(k, width, self.generic_start)

    def backward_ray(self, b: VertexSet) -> int | None:
        """t such that every prefix[j], j >= t, reaches the finite set b."""
        best = None
        for f in self.tail_families:
            for d in f.offsets:
                c = f.source_offset - d
                if c > 0:
                    t = self._band(b, c, self.generic_start + c)
                    if t is not None and (best is None or t < best):
                        best = t
        return best

    def ray(self, t: int) -> VertexSet:
        u = self.universe
        return VertexSet.cofinite_of(set(self.explicit_vertices(t)), u)

    # ---- windows
    def default_horizon(self) -> int:
        return max(self.universe.start + 8, self.generic_start + 2 * self.span + 2)

    def resolve(self, size: int) -> Window:
        """Finite sub-ultragraph on the vertices with tail index < size."""
        u = self.universe
        verts = self.explicit_vertices(size)
        w = VertexSet.finite(verts, u)
        edges, real = [], {}

        def add(e: Edge):
            if e.source not in w:
                return
            r = e.range & w
            if r.is_empty():
                return
            edges.append(Edge(e.id, e.source, VertexSet.finite(r.support)))
            real[e.id] = e

        for e in self.edges:
            add(e)
        for f in self.families:
            for n in range(f.start, size):
                add(f.instance(u, n))
        return Window(size, Ultragraph(verts, edges), real)

    def describe(self) -> dict:
        return {
            "exceptional": sort_names(self.universe.exceptional),
            "prefix": self.prefix,
            "tail_start": self.universe.start,
            "edges": [e.to_dict() for e in self.edges],
            "families": [f.id for f in self.families],
        }


@dataclass(frozen=True)
class MatrixRow:
    index: int
    cofinite: bool
    cols: frozenset[int]


@dataclass(frozen=True)
class RowFamily:
    start: int
    row_offset: int
    col_offsets: tuple[int, ...]
    fixed: frozenset[int] = frozenset()
    fixed_cofinite: bool = False


@dataclass(frozen=True)
class SymbolicMatrix:
    """Infinite {0,1} matrix indexed by n >= index_start.

    Rows are either listed explicitly (finite or cofinite column sets) or given
    by row families: row n+a has ones at columns n+d (d in col_offsets) plus a
    fixed finite or cofinite column set, for n >= start.
    """

    index_start: int
    rows: tuple[MatrixRow, ...] = ()
    families: tuple[RowFamily, ...] = ()

    def __post_init__(self):
        seen: set[int] = set()
        for r in self.rows:
            if r.index < self.index_start or r.index in seen:
                raise DuplicateId(f"row {r.index} declared twice or out of range")
            if any(j < self.index_start for j in r.cols):
                raise UniverseMismatch(f"row {r.index} references a column below the index start")
            seen.add(r.index)
        for f in self.families:
            for s in (f.row_offset, *f.col_offsets):
                if f.start + s < self.index_start:
                    raise UniverseMismatch("row family references indices below the index start")
        for i in range(self.index_start, self._explicit_max() + 2):
            if len(self._covering(i)) > 1:
                raise DuplicateId(f"row {i} is defined more than once")

    def _explicit_max(self) -> int:
        ks = [self.index_start]
        for r in self.rows:
            ks.append(r.index)
            ks.extend(r.cols)
        for f in self.families:
            ks.append(f.start + f.row_offset)
            ks.extend(f.start + d for d in f.col_offsets)
            ks.extend(f.fixed)
        return max(ks)

    def _covering(self, i: int) -> list:
        out: list = [r for r in self.rows if r.index == i]
        out += [f for f in self.families if i - f.row_offset >= f.start]
        return out

    def row(self, i: int) -> tuple[bool, frozenset[int]]:
        """(cofinite, columns) for row i; a zero row is (False, {})."""
        for src in self._covering(i):
            if isinstance(src, MatrixRow):
                return src.cofinite, src.cols
            n = i - src.row_offset
            cols = frozenset(n + d for d in src.col_offsets)
            if src.fixed_cofinite:
                return True, src.fixed - cols
            return False, cols | src.fixed
        return False, frozenset()

    def entry(self, i: int, j: int) -> int:
        cof, cols = self.row(i)
        return int((j not in cols) if cof else (j in cols))

    def truncate(self, size: int) -> list[list[int]]:
        idx = range(self.index_start, self.index_start + size)
        return [[self.entry(i, j) for j in idx] for i in idx]

    def reach(self) -> int:
        """Largest |d - a| over the row families."""
        return max([abs(d - f.row_offset) for f in self.families for d in f.col_offsets] + [0])

    def zero_rows(self) -> list[int]:
        hi = self._explicit_max() + self.reach() + 2
        zs = [i for i in range(self.index_start, hi + 1) if self.row(i) == (False, frozenset())]
        if not self.families:
            raise EmptyRange("infinitely many zero rows")
        return zs

    def ultragraph(self) -> SymbolicUltragraph:
        zs = self.zero_rows()
        if zs:
            raise EmptyRange(f"row {zs[0]} of the matrix is zero")
        u = TailUniverse.make((), "v", self.index_start)

        def cols_set(cof: bool, cols: Iterable[int]) -> VertexSet:
            names = [f"v{j}" for j in cols]
            return VertexSet.cofinite_of(names, u) if cof else VertexSet.finite(names, u)

        edges = [Edge(str(r.index), f"v{r.index}", cols_set(r.cofinite, r.cols)) for r in self.rows]
        fams = [
            EdgeFamily(f"row{k}", f.start, f.col_offsets, cols_set(f.fixed_cofinite, f.fixed),
                       source_offset=f.row_offset, naming=("index", f.row_offset))
            for k, f in enumerate(self.families)
        ]
        return SymbolicUltragraph((), "v", self.index_start, edges, fams)

    def graph(self) -> SymbolicUltragraph:
        u = TailUniverse.make((), "v", self.index_start)
        edges: list[Edge] = []
        fams: list[EdgeFamily] = []
        for r in self.rows:
            i = r.index
            if not r.cofinite:
                for j in sorted(r.cols):
                    edges.append(Edge(f"{i}_{j}", f"v{i}", VertexSet.finite([f"v{j}"], u)))
                continue
            b = max(r.cols | {i, self.index_start - 1}) + 1
            for j in range(self.index_start, b):
                if j not in r.cols:
                    edges.append(Edge(f"{i}_{j}", f"v{i}", VertexSet.finite([f"v{j}"], u)))
            fams.append(EdgeFamily(f"{i}_", b, (0,), VertexSet.empty(u), source_offset=None,
                                   fixed_source=f"v{i}", naming=("pair", str(i), 0)))
        for k, f in enumerate(self.families):
            if f.fixed_cofinite:
                raise Unsupported("cofinite fixed columns in a row family")
            for d in f.col_offsets:
                fams.append(EdgeFamily(f"gr{k}_{d}", f.start, (d,), VertexSet.empty(u),
                                       source_offset=f.row_offset, naming=("pair", f.row_offset, d)))
            for x in sorted(f.fixed):
                fams.append(EdgeFamily(f"gr{k}_c{x}", f.start, (), VertexSet.finite([f"v{x}"], u),
                                       source_offset=f.row_offset, naming=("pair", f.row_offset, str(x))))
        return SymbolicUltragraph((), "v", self.index_start, edges, fams)
