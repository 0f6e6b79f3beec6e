"""Condition (L), reachability, cofinality, simplicity, AF and pure infiniteness.

Simplicity is decided along two independent routes: the saturated hereditary
lattice, and the four reachability conditions (exits, cofinality, singular
vertices reached from everywhere, infinite ranges covered). ``is_simple`` runs
both and treats a disagreement as a bug.

For symbolic ultragraphs most quantifiers are discharged exactly with a
certificate vertex u0 that every vertex reaches. Statements that still need a
finite window are marked with the ``window_stabilized`` flag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce

from .errors import BudgetExceeded, Inconclusive, InternalDisagreement
from .ideals import backward_closure, hereditary_closure, is_hereditary, is_saturated, least_member, saturate
from .model import Edge, Loop, find_loops, is_loop, loop_key
from .sets import VertexSet, natural_key, sort_names

WINDOW_FLAG = "window_stabilized"
STRICT_FLAG = "strict_reachability_sensitive"


# ---------------------------------------------------------------- verdicts and witnesses
@dataclass(frozen=True)
class Verdict:
    status: str  # "decided" | "inconclusive"
    value: bool | None
    witness: object = None
    horizon: int | None = None
    flags: tuple[str, ...] = ()
    detail: dict = field(default_factory=dict, compare=False)

    @staticmethod
    def decided(value: bool, witness=None, horizon=None, flags=(), detail=None) -> "Verdict":
        return Verdict("decided", value, witness, horizon, tuple(sorted(set(flags))), detail or {})

    @staticmethod
    def inconclusive(reason: str, horizon=None) -> "Verdict":
        return Verdict("inconclusive", None, None, horizon, (), {"reason": reason})

    @property
    def is_decided(self) -> bool:
        return self.status == "decided"

    def holds(self) -> bool:
        return self.status == "decided" and self.value is True

    def fails(self) -> bool:
        return self.status == "decided" and self.value is False

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "value": self.value,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "horizon": self.horizon,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class EdgeExit:
    edge: str
    position: int

    def to_dict(self) -> dict:
        return {"type": "edge_exit", "edge": self.edge, "position": self.position}


@dataclass(frozen=True)
class SinkExit:
    vertex: str
    position: int

    def to_dict(self) -> dict:
        return {"type": "sink_exit", "vertex": self.vertex, "position": self.position}


@dataclass(frozen=True)
class LoopWitness:
    edges: tuple[str, ...]
    exitless: bool = False

    def to_dict(self) -> dict:
        return {"type": "exitless_loop" if self.exitless else "loop", "edges": list(self.edges)}


@dataclass(frozen=True)
class UnreachableWitness:
    source: str
    target: str

    def to_dict(self) -> dict:
        return {"type": "unreachable", "from": self.source, "to": self.target}


@dataclass(frozen=True)
class SupportWitness:
    seed: str
    support: VertexSet

    def to_dict(self) -> dict:
        return {"type": "saturated_hereditary", "seed": self.seed, "support": self.support.to_dict()}


@dataclass(frozen=True)
class AvoidingPathWitness:
    """An infinite path whose sources are never reached from ``vertex``.

    Either a cycle of edges, or a ray prefix[start], prefix[start+step], ...
    travelled along one edge family.
    """

    vertex: str
    cycle: tuple[str, ...] = ()
    ray: tuple[str, int, int] | None = None  # (family id, start index, step)

    def to_dict(self) -> dict:
        out = {"type": "avoiding_path", "vertex": self.vertex}
        if self.ray is None:
            out["cycle"] = list(self.cycle)
        else:
            out["ray"] = {"family": self.ray[0], "start": self.ray[1], "step": self.ray[2]}
        return out


@dataclass(frozen=True)
class CoverWitness:
    edge: str
    vertex: str

    def to_dict(self) -> dict:
        return {"type": "range_not_covered", "edge": self.edge, "vertex": self.vertex}


@dataclass(frozen=True)
class NoLoopWitness:
    vertex: str

    def to_dict(self) -> dict:
        return {"type": "no_loop_connection", "vertex": self.vertex}


@dataclass(frozen=True)
class ConditionWitness:
    condition: int
    inner: object

    def to_dict(self) -> dict:
        return {"type": "condition", "condition": self.condition, "witness": self.inner.to_dict()}


def _first(s: VertexSet, g) -> str:
    return least_member(g, s)


def _horizon(g, horizon: int | None) -> int | None:
    if not g.is_symbolic:
        return None
    return g.default_horizon() if horizon is None else horizon


def _period(g) -> int:
    steps = [abs(d - f.source_offset) for f in g.tail_families for d in f.offsets if d != f.source_offset]
    return reduce(math.lcm, steps, 1)


def _quantified(g, h: int) -> list[str]:
    return sort_names(g.explicit_vertices(h))


def _vertices(g, h: int | None) -> list[str]:
    return list(g.vertices) if not g.is_symbolic else _quantified(g, h)


def _guard(fn):
    """Turn Inconclusive raised by closures into an inconclusive verdict."""
    def wrapped(g, *args, horizon: int | None = None, **kw):
        h = _horizon(g, horizon)
        try:
            return fn(g, *args, horizon=h, **kw)
        except Inconclusive as exc:
            return Verdict.inconclusive(str(exc), h)
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    wrapped.__wrapped__ = fn
    return wrapped


# ---------------------------------------------------------------- exits and condition (L)
def find_exit(g, edges) -> EdgeExit | SinkExit | None:
    """First exit of a loop, scanning positions in order; None if exitless."""
    sinks = g.sinks()
    n = len(edges)
    for i, a in enumerate(edges):
        nxt = edges[(i + 1) % n]
        hit = a.range & sinks
        if not hit.is_empty():
            return SinkExit(_first(hit, g), i)
        emitters = a.range - sinks - g.vset([nxt.source])
        if not emitters.is_empty():
            x = _first(emitters, g)
            return EdgeExit(_least_edge_from(g, x).id, i)
        others = [e for e in _edges_near(g, nxt.source, 2) if e.id != nxt.id]
        if others:
            return EdgeExit(others[0].id, i)
    return None


def _edges_near(g, v: str, limit: int) -> list[Edge]:
    if g.emission(v) == math.inf:
        out = [e for e in g.edges if e.source == v]
        for f in g.fixed_source_families(v):
            out += [f.instance(g.universe, n) for n in range(f.start, f.start + limit)]
        return sorted(out, key=lambda e: natural_key(e.id))
    return sorted(g.edges_from(v), key=lambda e: natural_key(e.id))


def _least_edge_from(g, v: str) -> Edge:
    return _edges_near(g, v, 1)[0]


def _successor(g, a: Edge, sinks: VertexSet) -> Edge | None:
    """The unique edge that can follow ``a`` without creating an exit, if any."""
    if a.range.cofinite or not (a.range & sinks).is_empty():
        return None
    total, unique = 0, None
    for w in a.range.support:
        em = g.emission(w)
        total += em
        if total > 1:
            return None
        if em == 1:
            unique = g.edges_from(w)[0]
    return unique


def _exitless_loops(g, candidates: list[Edge]) -> list[tuple[Edge, ...]]:
    """Exitless loops are exactly the cycles of the unique-successor map on edges."""
    sinks = g.sinks()
    succ: dict[str, Edge | None] = {}

    def nxt(e: Edge):
        if e.id not in succ:
            succ[e.id] = _successor(g, e, sinks)
        return succ[e.id]

    # past the candidate window every successor step is the same uniform shift,
    # so a chain that climbs above it never returns
    ceiling = None
    if g.is_symbolic:
        ceiling = g.universe.start + g.generic_start + 2 * g.span + 3 + g.span
    loops = []
    for start in candidates:
        seen, ids, e = [], set(), start
        while e is not None and e.id not in ids:
            if ceiling is not None and (g.refidx(e.source) or 0) > ceiling:
                e = None
                break
            seen.append(e)
            ids.add(e.id)
            e = nxt(e)
        if e is not None and e.id == start.id:
            loops.append(tuple(seen))
    return loops


def _loop_candidates(g) -> list[Edge]:
    if not g.is_symbolic:
        return list(g.edges)
    size = g.generic_start + 2 * g.span + 3
    return list(g.resolve(size).real.values())


# the trail is explanatory only, so it gets a smaller default search budget
TRAIL_BUDGET = 20_000


def _loop_trail(g, h: int | None, budget: int | None) -> dict:
    graph = g if not g.is_symbolic else g.resolve(h).graph
    try:
        loops = find_loops(graph, budget=TRAIL_BUDGET if budget is None else budget)
    except BudgetExceeded:
        return {"loops_examined": None}
    common = set(loops[0].ids) if loops else set()
    for lp in loops[1:]:
        common &= set(lp.ids)
    return {"loops_examined": len(loops), "common_edges": sort_names(common)}


@_guard
def condition_L(g, horizon: int | None = None, budget: int | None = None) -> Verdict:
    """Every loop has an exit."""
    bad = _exitless_loops(g, _loop_candidates(g))
    trail = _loop_trail(g, horizon, budget)
    if bad:
        least = min(bad, key=lambda p: loop_key([e.id for e in p]))
        return Verdict.decided(False, LoopWitness(tuple(e.id for e in least), True), horizon, detail=trail)
    return Verdict.decided(True, None, horizon, detail=trail)


# ---------------------------------------------------------------- reachability
def reach_set(g, v: str, horizon: int | None = None) -> VertexSet:
    """R(v) = {w : v >= w}, reflexive."""
    return hereditary_closure(g, g.vset([v]), _horizon(g, horizon))


def reaches(g, w: str, v: str, horizon: int | None = None) -> bool:
    """w >= v: v = w or v lies in the range of a path starting at w."""
    return v in reach_set(g, w, horizon)


def strictly_reaches(g, w: str, v: str, horizon: int | None = None) -> bool:
    """Positive-length reading of w >= v."""
    return v in g.out_union(reach_set(g, w, horizon))


def _infinite_range_edges(g) -> list[Edge]:
    if not g.is_symbolic:
        return []
    out = [e for e in g.edges if e.range.cofinite]
    for f in g.families:
        if f.fixed.cofinite:
            out.append(f.instance(g.universe, f.start))
    return sorted(out, key=lambda e: natural_key(e.id))


def _infinite_range_sources(g) -> VertexSet:
    acc = g.vset(e.source for e in g.edges if e.range.cofinite)
    for f in g.families:
        if f.fixed.cofinite:
            if f.fixed_source is not None:
                acc = acc | g.vset([f.fixed_source])
            else:
                acc = acc | g.tabulate(
                    lambda x, f=f: (g.refidx(x) is not None and g.refidx(x) - f.source_offset >= f.start),
                    g.bound_for())
    return acc


def reaches_set(g, v: str, a: VertexSet, horizon: int | None = None) -> bool:
    """v -> A: A is covered by the ranges of finitely many paths from v."""
    r = reach_set(g, v, horizon)
    if not a <= r:
        return False
    if a.is_finite():
        return True
    return not (_infinite_range_sources(g) & r).is_empty()


# ---------------------------------------------------------------- cofinality
def _find_cycle(nodes: list[str], adj: dict[str, list[str]]) -> list[str] | None:
    color: dict[str, int] = {}
    for root in nodes:
        if root in color:
            continue
        stack = [(root, iter(adj.get(root, ())))]
        path = [root]
        color[root] = 1
        while stack:
            x, it = stack[-1]
            y = next(it, None)
            if y is None:
                color[x] = 2
                stack.pop()
                path.pop()
                continue
            c = color.get(y, 0)
            if c == 1:
                return path[path.index(y):]
            if c == 0:
                color[y] = 1
                stack.append((y, iter(adj.get(y, ()))))
                path.append(y)
    return None


def _moves(g, x: str, z: VertexSet) -> dict[str, str]:
    """Targets y in finite z of single edges from x, each with the least edge id."""
    out: dict[str, str] = {}

    def note(y: str, eid: str):
        if y not in out or natural_key(eid) < natural_key(out[y]):
            out[y] = eid

    if g.emission(x) != math.inf:
        for e in g.edges_from(x):
            for y in (e.range & z).support:
                note(y, e.id)
        return out
    for e in g.edges:
        if e.source == x:
            for y in (e.range & z).support:
                note(y, e.id)
    for f in g.fixed_source_families(x):
        for y in (f.fixed & z).support:
            note(y, f.instance_id(f.start))
        for y in z.support:
            j = g.refidx(y)
            if j is None:
                continue
            ns = [j - d for d in f.offsets if j - d >= f.start]
            if ns:
                note(y, f.instance_id(min(ns)))
    return out


def _cycle_in(g, z: VertexSet, vertex: str) -> AvoidingPathWitness | None:
    nodes = sort_names(z.support)
    moves = {x: _moves(g, x, z) for x in nodes}
    adj = {x: sort_names(m) for x, m in moves.items()}
    cyc = _find_cycle(nodes, adj)
    if cyc is None:
        return None
    edges = tuple(moves[a][b] for a, b in zip(cyc, cyc[1:] + cyc[:1]))
    return AvoidingPathWitness(vertex, edges)


def _avoiding_path(g, z: VertexSet, vertex: str, h: int | None) -> tuple[AvoidingPathWitness | None, bool]:
    """Infinite path inside z (vertices not reached from ``vertex``); second item: exact."""
    if not z.cofinite:
        return _cycle_in(g, z, vertex), True
    t = g.bound_for(z)
    for f in g.tail_families:
        ups = sorted(d - f.source_offset for d in f.offsets if d > f.source_offset)
        if ups:
            return AvoidingPathWitness(vertex, ray=(f.id, t, ups[0])), True
        if f.fixed.cofinite:
            return AvoidingPathWitness(vertex, ray=(f.id, t, 1)), True
    for size in (h, h + _period(g)):
        w = _cycle_in(g, z & g.vset(g.explicit_vertices(size)), vertex)
        if w is not None:
            return w, True
    return None, False


def _complement_reach(g, v: str, h) -> VertexSet:
    return g.full() - reach_set(g, v, h)


@_guard
def is_cofinal(g, horizon: int | None = None) -> Verdict:
    """From every vertex some source on every infinite path is reachable."""
    if not g.is_symbolic:
        for v in g.vertices:
            w = _cycle_in(g, _complement_reach(g, v, None), v)
            if w is not None:
                return Verdict.decided(False, w)
        return Verdict.decided(True)
    h = horizon
    for u in _quantified(g, h):
        if backward_closure(g, g.vset([u]), h).is_full():
            w, exact = _avoiding_path(g, _complement_reach(g, u, h), u, h)
            if w is not None:
                return Verdict.decided(False, w, h)
            return Verdict.decided(True, None, h, () if exact else (WINDOW_FLAG,))
    flags = {WINDOW_FLAG}
    for size in (h, h + _period(g)):
        for v in _quantified(g, size):
            w, _ = _avoiding_path(g, _complement_reach(g, v, h), v, h)
            if w is not None:
                return Verdict.decided(False, w, h)
    return Verdict.decided(True, None, h, flags)


# ---------------------------------------------------------------- simplicity, lattice route
@_guard
def is_simple_lattice(g, horizon: int | None = None, budget: int | None = None) -> Verdict:
    """Condition (L) and saturate(hereditary_closure({v})) = G0 for every v."""
    lv = condition_L.__wrapped__(g, horizon=horizon, budget=budget)
    if not lv.holds():
        return Verdict.decided(False, lv.witness, horizon, lv.flags)
    h = horizon
    flags = set(lv.flags)
    for v in _vertices(g, h):
        k = saturate(g, hereditary_closure(g, g.vset([v]), h), h).final.support
        if not k.is_full():
            return Verdict.decided(False, SupportWitness(v, k), h, flags)
        if g.is_symbolic and backward_closure(g, g.vset([v]), h).is_full():
            return Verdict.decided(True, None, h, flags)
    if g.is_symbolic:
        flags.add(WINDOW_FLAG)
    return Verdict.decided(True, None, h, flags)


# ---------------------------------------------------------------- simplicity, reachability route
def _singular_reached(g, h, strict: bool) -> object | None:
    """Witness that condition (3) fails, or None."""
    sing = g.singular()
    if sing.cofinite:
        sinks = g.sinks()
        a = _first(sinks, g)
        b = _first(sinks - g.vset([a]), g)
        return UnreachableWitness(a, b)
    for v in sort_names(sing.support):
        target = g.vset([v])
        if strict:
            target = g.sources_hitting(target)
        reach = backward_closure(g, target, h)
        if not reach.is_full():
            return UnreachableWitness(_first(g.full() - reach, g), v)
    return None


def _ranges_covered(g, h) -> object | None:
    """Witness that condition (4) fails, or None."""
    big = _infinite_range_edges(g)
    if not big:
        return None
    reach = backward_closure(g, _infinite_range_sources(g), h)
    if reach.is_full():
        return None
    return CoverWitness(big[0].id, _first(g.full() - reach, g))


@_guard
def is_simple_reach(g, horizon: int | None = None, budget: int | None = None) -> Verdict:
    """Conditions (1)-(4): (L), cofinal, singular vertices reached, infinite ranges covered."""
    h = horizon
    lv = condition_L.__wrapped__(g, horizon=h, budget=budget)
    if not lv.holds():
        return Verdict.decided(False, ConditionWitness(1, lv.witness), h, lv.flags)
    cv = is_cofinal.__wrapped__(g, horizon=h)
    if not cv.holds():
        return Verdict.decided(False, ConditionWitness(2, cv.witness), h, cv.flags)
    flags = set(lv.flags) | set(cv.flags)
    w3 = _singular_reached(g, h, strict=False)
    strict3 = _singular_reached(g, h, strict=True)
    if (w3 is None) != (strict3 is None):
        flags.add(STRICT_FLAG)
    if w3 is not None:
        return Verdict.decided(False, ConditionWitness(3, w3), h, flags)
    w4 = _ranges_covered(g, h)
    if w4 is not None:
        return Verdict.decided(False, ConditionWitness(4, w4), h, flags)
    return Verdict.decided(True, None, h, flags)


def is_simple(g, horizon: int | None = None, budget: int | None = None) -> Verdict:
    """Both characterizations; they must agree."""
    a = is_simple_lattice(g, horizon=horizon, budget=budget)
    b = is_simple_reach(g, horizon=horizon, budget=budget)
    detail = {"lattice": a, "reach": b}
    if not a.is_decided or not b.is_decided:
        reason = (a.detail.get("reason") or b.detail.get("reason") or "undecided")
        return Verdict("inconclusive", None, None, a.horizon, (), {"reason": reason, **detail})
    if a.value != b.value:
        raise InternalDisagreement(f"lattice route says {a.value}, reachability route says {b.value}")
    return Verdict.decided(a.value, a.witness or b.witness, a.horizon, a.flags + b.flags, detail)


# ---------------------------------------------------------------- loops, AF, pure infiniteness
def _loop_vertices(graph) -> set[str]:
    """Vertices lying on a cycle of the source-transition digraph (= loop sources)."""
    adj = {v: set() for v in graph.vertices}
    for e in graph.edges:
        adj[e.source] |= set(e.range.support)
    # strongly connected components with a cycle
    index, low, onstack, stack, out = {}, {}, set(), [], set()
    counter = [0]

    def strong(v):
        work = [(v, iter(sort_names(adj[v])))]
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        onstack.add(v)
        while work:
            x, it = work[-1]
            y = next(it, None)
            if y is not None:
                if y not in index:
                    index[y] = low[y] = counter[0]
                    counter[0] += 1
                    stack.append(y)
                    onstack.add(y)
                    work.append((y, iter(sort_names(adj[y]))))
                elif y in onstack:
                    low[x] = min(low[x], index[y])
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[x])
            if low[x] == index[x]:
                comp = []
                while True:
                    z = stack.pop()
                    onstack.discard(z)
                    comp.append(z)
                    if z == x:
                        break
                if len(comp) > 1 or x in adj[x]:
                    out.update(comp)

    for v in graph.vertices:
        if v not in index:
            strong(v)
    return out


def least_loop(graph) -> Loop | None:
    """Least loop by (length, edge ids); the shortest loops have distinct sources."""
    edges = sorted(graph.edges, key=lambda e: natural_key(e.id))
    by_src: dict[str, list[Edge]] = {}
    for e in edges:
        by_src.setdefault(e.source, []).append(e)
    if not _loop_vertices(graph):
        return None
    for length in range(1, len(graph.vertices) + 1):
        for first in edges:
            stack = [(first,)]
            while stack:
                path = stack.pop()
                if len(path) == length:
                    if first.source in path[-1].range:
                        return Loop.of(path)
                    continue
                used = {e.source for e in path}
                nxt = [e for v in path[-1].range.support if v not in used for e in by_src.get(v, ())]
                for e in sorted(nxt, key=lambda e: natural_key(e.id), reverse=True):
                    stack.append(path + (e,))
    return None


def _window_loops(g, h: int) -> tuple[set[str], Loop | None]:
    w = g.resolve(h)
    return _loop_vertices(w.graph), least_loop(w.graph)


def connects_to_loop(g, v: str, horizon: int | None = None) -> bool:
    """Some positive-length path from v has a loop vertex in its range."""
    h = _horizon(g, horizon)
    hit = g.out_union(reach_set(g, v, h))
    if not g.is_symbolic:
        return any(x in hit for x in _loop_vertices(g))
    for size in (h, h + _period(g)):
        verts, _ = _window_loops(g, size)
        if any(x in hit for x in verts):
            return True
    return False


@_guard
def is_af(g, horizon: int | None = None) -> Verdict:
    """AF exactly when there are no loops; witness is the least loop."""
    if not g.is_symbolic:
        lp = least_loop(g)
        return Verdict.decided(lp is None, None if lp is None else LoopWitness(lp.ids))
    for size in (horizon, horizon + _period(g)):
        _, lp = _window_loops(g, size)
        if lp is not None:
            real = [g.resolve(size).real_edge(i) for i in lp.ids]
            assert is_loop(real)
            return Verdict.decided(False, LoopWitness(lp.ids), horizon)
    return Verdict.decided(True, None, horizon, (WINDOW_FLAG,))


@_guard
def is_purely_infinite(g, horizon: int | None = None, budget: int | None = None) -> Verdict:
    """Condition (L) and every vertex connects to a loop."""
    h = horizon
    lv = condition_L.__wrapped__(g, horizon=h, budget=budget)
    if not lv.holds():
        return Verdict.decided(False, lv.witness, h, lv.flags)
    flags = set(lv.flags)
    for v in _vertices(g, h):
        ok = connects_to_loop(g, v, h)
        if not ok:
            if g.is_symbolic:
                flags.add(WINDOW_FLAG)
            return Verdict.decided(False, NoLoopWitness(v), h, flags)
        if g.is_symbolic and backward_closure(g, g.vset([v]), h).is_full():
            return Verdict.decided(True, None, h, flags)
    if g.is_symbolic:
        flags.add(WINDOW_FLAG)
    return Verdict.decided(True, None, h, flags)


class Dichotomy(str, Enum):
    AF = "AF"
    PURELY_INFINITE = "PurelyInfinite"
    NOT_SIMPLE = "NotSimple"


def dichotomy(g, horizon: int | None = None, budget: int | None = None) -> Dichotomy:
    """A simple ultragraph algebra is AF or purely infinite, never both."""
    s = is_simple(g, horizon=horizon, budget=budget)
    if not s.is_decided:
        raise Inconclusive(s.detail.get("reason", "simplicity undecided"))
    if not s.value:
        return Dichotomy.NOT_SIMPLE
    af = is_af(g, horizon=horizon)
    pi = is_purely_infinite(g, horizon=horizon, budget=budget)
    if not af.is_decided or not pi.is_decided:
        raise Inconclusive("AF / purely infinite undecided")
    if af.value == pi.value:
        raise InternalDisagreement(f"simple algebra with AF={af.value} and purely infinite={pi.value}")
    return Dichotomy.AF if af.value else Dichotomy.PURELY_INFINITE


# ---------------------------------------------------------------- witness re-checks
def verify_witness(g, witness, horizon: int | None = None) -> bool:
    """Re-check a negative witness using only the public predicates."""
    h = _horizon(g, horizon)
    if isinstance(witness, ConditionWitness):
        return verify_witness(g, witness.inner, h)
    if isinstance(witness, LoopWitness):
        edges = [g.edge(i) for i in witness.edges]
        if not is_loop(edges):
            return False
        return find_exit(g, edges) is None if witness.exitless else True
    if isinstance(witness, SupportWitness):
        k = witness.support
        return (is_hereditary(g, k).holds and is_saturated(g, k).holds
                and not k.is_empty() and not k.is_full())
    if isinstance(witness, UnreachableWitness):
        return not reaches(g, witness.source, witness.target, h)
    if isinstance(witness, CoverWitness):
        e = g.edge(witness.edge)
        r = reach_set(g, witness.vertex, h)
        return not reaches_set(g, witness.vertex, e.range & r, h) or not (e.range - r).is_finite()
    if isinstance(witness, NoLoopWitness):
        return not connects_to_loop(g, witness.vertex, h)
    if isinstance(witness, AvoidingPathWitness):
        r = reach_set(g, witness.vertex, h)
        if witness.ray is None:
            edges = [g.edge(i) for i in witness.cycle]
            if not edges or not all(b.source in a.range for a, b in zip(edges, edges[1:] + edges[:1])):
                return False
            return all(e.source not in r for e in edges)
        fid, t, step = witness.ray
        f = next(f for f in g.families if f.id == fid)
        u = g.universe
        for k in range(4):
            j = t + k * step
            e = f.instance(u, j - f.source_offset)
            if g.name(j) in r or g.name(j + step) not in e.range:
                return False
        return r.is_finite() and (r.max_tail_index() or -1) < t
    raise TypeError(f"unknown witness {witness!r}")
