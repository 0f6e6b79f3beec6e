"""Hereditary and saturated subcollections, represented by their vertex support K.

For symbolic ultragraphs the closures are computed exactly on finite/cofinite
sets. When a closure of a finite set keeps creeping up the tail, a ray lemma
(see ``SymbolicUltragraph.forward_ray`` and friends) jumps straight to the
limit; if none applies the computation stops with ``Inconclusive``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .errors import BudgetExceeded, Inconclusive, NotHereditary, NotSaturatedHereditary, Unsupported
from .model import Edge, Ultragraph
from .sets import VertexSet, natural_key, sort_names

ENUMERATION_BOUND = 16
LIFT_SLACK = 64


@dataclass(frozen=True)
class HereditaryCollection:
    """The collection {A in G0 : A subset of support}."""

    support: VertexSet

    def contains(self, a: VertexSet) -> bool:
        return a <= self.support

    def to_dict(self) -> dict:
        return {"type": "hereditary_support", "support": self.support.to_dict()}


@dataclass(frozen=True)
class Check:
    holds: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class SaturationTrace:
    layers: tuple[VertexSet, ...]
    final: HereditaryCollection
    # indices of layers produced by a ray jump rather than one saturation step
    lifted: tuple[int, ...] = ()


@dataclass(frozen=True)
class QuotientUltragraph:
    graph: Ultragraph
    degenerate: bool = False
    warnings: tuple[str, ...] = field(default=())


def _norm(g, k: VertexSet) -> VertexSet:
    return k.with_universe(g.universe) if k.universe is None else k


def least_member(g, s: VertexSet) -> str | None:
    """Least vertex of s in natural order."""
    if s.is_empty():
        return None
    if not s.cofinite:
        return min(s.support, key=natural_key)
    b = g.bound_for(s)
    cands = [v for v in g.explicit_vertices(b) if v in s]
    k = b
    while g.name(k) not in s:
        k += 1
    cands.append(g.name(k))
    return min(cands, key=natural_key)


def _cap(g, horizon: int | None) -> int:
    return g.generic_start + LIFT_SLACK * (g.span + 1) + (horizon or 0)


def _too_far(g, k: VertexSet, horizon: int | None) -> bool:
    m = k.max_tail_index()
    return (not k.cofinite) and m is not None and m > _cap(g, horizon)


# ---------------------------------------------------------------- hereditary
def _candidate_sources(g, k: VertexSet) -> list[str]:
    b = g.bound_for(k) + g.span + 2
    return [v for v in g.explicit_vertices(b) if v in k]


def is_hereditary(g, k: VertexSet) -> Check:
    """s(e) in K implies r(e) subset of K; witness is the least violating edge."""
    k = _norm(g, k)
    if not g.is_symbolic:
        bad = [e for e in g.edges if e.source in k and not e.range <= k]
        if bad:
            return Check(False, min(bad, key=lambda e: natural_key(e.id)))
        return Check(True)
    bad = [e for e in g.edges if e.source in k and not e.range <= k]
    for v in _candidate_sources(g, k):
        if g.emission(v) != math.inf:
            bad += [e for e in g.edges_from(v) if not e.range <= k]
    u = g.universe
    for f in g.families:
        if f.fixed_source is None or f.fixed_source not in k:
            continue
        hi = g.bound_for(k) + g.span + 2
        for n in range(f.start, max(hi, f.start + 1)):
            e = f.instance(u, n)
            if not e.range <= k:
                bad.append(e)
                break
    if bad:
        return Check(False, min(bad, key=lambda e: natural_key(e.id)))
    return Check(True)


def is_saturated(g, k: VertexSet) -> Check:
    """Every regular vertex whose edge ranges all lie in K is itself in K."""
    k = _norm(g, k)
    if not is_hereditary(g, k):
        raise NotHereditary("saturation is only defined for hereditary supports")
    missing = g.ready_layer(k) - k
    if missing.is_empty():
        return Check(True)
    return Check(False, least_member(g, missing))


# ---------------------------------------------------------------- closures
def hereditary_closure(g, seed: VertexSet, horizon: int | None = None) -> VertexSet:
    """Least hereditary support containing seed."""
    seed = _norm(g, seed)
    if not g.is_symbolic:
        k = set(seed.support)
        work = list(k)
        while work:
            v = work.pop()
            for e in g.edges_from(v):
                for w in e.range.support:
                    if w not in k:
                        k.add(w)
                        work.append(w)
        return g.vset(k)
    k = seed
    while True:
        nxt = k | g.out_union(k)
        if nxt == k:
            return k
        k = nxt
        if not k.cofinite:
            t = g.forward_ray(k)
            if t is not None:
                k = k | g.ray(t)
            elif _too_far(g, k, horizon):
                raise Inconclusive("hereditary closure does not stabilize")


def backward_closure(g, target: VertexSet, horizon: int | None = None) -> VertexSet:
    """All vertices w with w >= b for some b in target (reflexive)."""
    target = _norm(g, target)
    if not g.is_symbolic:
        preds: dict[str, set[str]] = {}
        for e in g.edges:
            for w in e.range.support:
                preds.setdefault(w, set()).add(e.source)
        k = set(target.support)
        work = list(k)
        while work:
            w = work.pop()
            for x in preds.get(w, ()):
                if x not in k:
                    k.add(x)
                    work.append(x)
        return g.vset(k)
    k = target
    while True:
        nxt = k | g.sources_hitting(k)
        if nxt == k:
            return k
        k = nxt
        if not k.cofinite:
            t = g.backward_ray(k)
            if t is not None:
                k = k | g.ray(t)
            elif _too_far(g, k, horizon):
                raise Inconclusive("backward closure does not stabilize")


def saturate(g, k: VertexSet, horizon: int | None = None) -> SaturationTrace:
    """Saturation by layers K_{n+1} = K_n plus regular vertices ready in K_n."""
    k = _norm(g, k)
    if not is_hereditary(g, k):
        raise NotHereditary("saturate needs a hereditary support")
    layers: list[VertexSet] = []
    lifted: list[int] = []
    while True:
        new = g.ready_layer(k) - k
        if new.is_empty():
            break
        layers.append(new)
        k = k | new
        if g.is_symbolic and not k.cofinite:
            t = g.saturation_ray(k)
            if t is not None:
                extra = g.ray(t) - k
                if not extra.is_empty():
                    lifted.append(len(layers))
                    layers.append(extra)
                    k = k | extra
            elif _too_far(g, k, horizon):
                raise Inconclusive("saturation does not stabilize")
    return SaturationTrace(tuple(layers), HereditaryCollection(k), tuple(lifted))


def saturated_hereditary_hull(g, seed: VertexSet, horizon: int | None = None) -> VertexSet:
    return saturate(g, hereditary_closure(g, seed, horizon), horizon).final.support


# ---------------------------------------------------------------- enumeration
def enumerate_saturated_hereditary(g: Ultragraph, bound: int = ENUMERATION_BOUND) -> list[HereditaryCollection]:
    """Every saturated hereditary support, ordered by size then vertex order."""
    if g.is_symbolic:
        raise Unsupported("enumeration needs a finite ultragraph")
    n = len(g.vertices)
    if n > bound:
        raise BudgetExceeded(f"{n} vertices exceeds the enumeration bound {bound}")
    idx = {v: i for i, v in enumerate(g.vertices)}
    edges = [(1 << idx[e.source], sum(1 << idx[w] for w in e.range.support)) for e in g.edges]
    regular = []
    for v in g.vertices:
        es = g.edges_from(v)
        if es:
            regular.append((1 << idx[v], [sum(1 << idx[w] for w in e.range.support) for e in es]))
    out = []
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            m = sum(1 << i for i in combo)
            if any(m & s and r & ~m for s, r in edges):
                continue
            if any(not m & v and all(r & ~m == 0 for r in rs) for v, rs in regular):
                continue
            out.append(HereditaryCollection(g.vset(g.vertices[i] for i in combo)))
    return out


# ---------------------------------------------------------------- quotient
def quotient_ultragraph(g, k: VertexSet) -> QuotientUltragraph:
    """Ultragraph on S = G0 minus K keeping edges that meet S, ranges cut to S."""
    k = _norm(g, k)
    if not is_hereditary(g, k) or not is_saturated(g, k):
        raise NotSaturatedHereditary("quotient needs a saturated hereditary support")
    s = g.full() - k
    if s.is_empty():
        return QuotientUltragraph(Ultragraph([], []), True, ("K is the whole vertex set",))
    if g.is_symbolic:
        return QuotientUltragraph(_symbolic_quotient(g, s))
    kept = []
    for e in g.edges:
        r = e.range & s
        if not r.is_empty():
            assert e.source in s
            kept.append(Edge(e.id, e.source, r.support))
    return QuotientUltragraph(Ultragraph(s.members(), kept))


def _symbolic_quotient(g, s: VertexSet) -> Ultragraph:
    if s.cofinite:
        raise Unsupported("quotients are materialized only for finite complements")
    u = g.universe
    edges: list[Edge] = []

    def keep(e: Edge):
        r = e.range & s
        if not r.is_empty():
            assert e.source in s
            edges.append(Edge(e.id, e.source, r.support))

    for e in g.edges:
        keep(e)
    for f in g.families:
        if f.fixed_source is not None:
            if f.fixed_source not in s:
                continue
            if not (f.fixed & s).is_empty():
                raise Unsupported(f"family {f.id} leaves infinitely many edges in the quotient")
            for w in s.support:
                j = g.refidx(w)
                if j is not None:
                    for d in f.offsets:
                        if j - d >= f.start:
                            keep(f.instance(u, j - d))
            continue
        for w in s.support:
            j = g.refidx(w)
            if j is not None and j - f.source_offset >= f.start:
                keep(f.instance(u, j - f.source_offset))
    return Ultragraph(sort_names(s.support), edges)


def downstream_restriction(g: Ultragraph, v: str) -> Ultragraph:
    """Sub-ultragraph on the vertices reachable from v with all of their edges."""
    if g.is_symbolic:
        raise Unsupported("downstream restriction needs a finite ultragraph")
    f0 = hereditary_closure(g, g.vset([v]))
    return Ultragraph(f0.members(), [e for e in g.edges if e.source in f0])
