"""Vertex-set algebra: the generated lattice and the commutative projection calculus.

Projections p_A commute and multiply like indicator functions, so a rational
combination of them is determined by its pointwise values on vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

from .errors import BudgetExceeded, HasSinks, NoUnit
from .model import Ultragraph
from .sets import FiniteUniverse, TailUniverse, Universe, VertexSet, natural_key, sort_names

__all__ = [
    "VertexSet", "FiniteUniverse", "TailUniverse", "LatticeElement", "ProjectionCombo",
    "OrthoAtom", "generate_lattice", "orthogonalize", "partition_identity", "evaluate",
    "regular_ideal_support",
]

LATTICE_VERTEX_BOUND = 12
ORTHO_BOUND = 16


@dataclass(frozen=True)
class LatticeElement:
    value: VertexSet
    # each entry X_i is a tuple of edge ids; the term is the intersection of their ranges
    decomposition: tuple[tuple[str, ...], ...]
    finite_part: VertexSet

    def recompose(self, g: Ultragraph) -> VertexSet:
        acc = g.vset()
        for xs in self.decomposition:
            term = g.full()
            for eid in xs:
                term = term & g.edge(eid).range
            acc = acc | term
        return acc | self.finite_part


def _range_meets(g: Ultragraph, index: dict[str, int]) -> dict[int, tuple[str, ...]]:
    """All nonempty intersections of edge ranges, each with a least witnessing id set."""
    def mask(vs: VertexSet) -> int:
        return sum(1 << index[v] for v in vs.support)

    def better(a: tuple[str, ...], b: tuple[str, ...]) -> bool:
        return (len(a), [natural_key(x) for x in a]) < (len(b), [natural_key(x) for x in b])

    found: dict[int, tuple[str, ...]] = {}
    ranges = [(e.id, mask(e.range)) for e in g.edges]
    work = []
    for eid, m in ranges:
        if m not in found or better((eid,), found[m]):
            found[m] = (eid,)
            work.append(m)
    while work:
        m = work.pop()
        for eid, r in ranges:
            x = m & r
            if not x:
                continue
            ids = tuple(sorted(set(found[m]) | {eid}, key=natural_key))
            if x not in found or better(ids, found[x]):
                found[x] = ids
                work.append(x)
    return found


def generate_lattice(g: Ultragraph, bound: int = LATTICE_VERTEX_BOUND) -> list[LatticeElement]:
    """All elements of the lattice generated by singletons and ranges, with decompositions."""
    if g.is_symbolic:
        raise TypeError("generate_lattice needs a finite ultragraph")
    n = len(g.vertices)
    if n > bound:
        raise BudgetExceeded(f"{n} vertices exceeds the lattice bound {bound}")
    index = {v: i for i, v in enumerate(g.vertices)}
    gens = {1 << i for i in range(n)}
    gens |= {sum(1 << index[v] for v in e.range.support) for e in g.edges}
    meets = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for b in gens:
                c = a & b
                if c not in meets:
                    meets.add(c)
                    nxt.append(c)
        frontier = nxt
    elements = {0}
    for m in sorted(meets):
        elements |= {s | m for s in elements}
    rmeets = _range_meets(g, index)

    def to_set(m: int) -> VertexSet:
        return g.vset(v for v, i in index.items() if m >> i & 1)

    out = []
    for val in elements:
        parts = [x for x in rmeets if x & ~val == 0]
        maximal = [x for x in parts if not any(x != y and x & ~y == 0 for y in parts)]
        covered = 0
        for x in maximal:
            covered |= x
        decomp = tuple(sorted((rmeets[x] for x in maximal),
                              key=lambda t: (len(t), [natural_key(i) for i in t])))
        out.append(LatticeElement(to_set(val), decomp, to_set(val & ~covered)))
    out.sort(key=lambda el: (len(el.value), [natural_key(v) for v in el.value]))
    return out


@dataclass(frozen=True)
class ProjectionCombo:
    terms: tuple[tuple[Fraction, VertexSet], ...]

    @staticmethod
    def of(pairs: Iterable[tuple[object, VertexSet]]) -> "ProjectionCombo":
        return ProjectionCombo(tuple((Fraction(c), s) for c, s in pairs))

    def canonical(self) -> "ProjectionCombo":
        """Merge equal sets and drop empty sets and zero coefficients."""
        acc: dict[tuple, Fraction] = {}
        sets: dict[tuple, VertexSet] = {}
        for c, s in self.terms:
            key = (s.cofinite, s.support)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
            sets.setdefault(key, s)
        return ProjectionCombo(tuple(
            (acc[k], sets[k]) for k in acc if acc[k] != 0 and not sets[k].is_empty()
        ))


@dataclass(frozen=True)
class OrthoAtom:
    """coefficient * Q(B, C), where Q(B, C) = p_B - p_B p_C is the indicator of B minus C."""

    B: VertexSet
    C: VertexSet
    coefficient: Fraction

    def set(self) -> VertexSet:
        return self.B - self.C

    def to_dict(self) -> dict:
        return {"B": self.B.to_dict(), "C": self.C.to_dict(), "coefficient": str(self.coefficient)}


def _universe_of(sets: Iterable[VertexSet]) -> Universe | None:
    for s in sets:
        if s.universe is not None:
            return s.universe
    return None


def orthogonalize(c: ProjectionCombo, bound: int = ORTHO_BOUND) -> list[OrthoAtom]:
    """Rewrite sum lambda_k p_{A_k} as a combination of mutually orthogonal atoms.

    For each nonempty I the atom is Q(meet of A_i over I, join of A_i off I)
    with coefficient the sum of lambda_i over I.
    """
    terms = c.canonical().terms
    n = len(terms)
    if n > bound:
        raise BudgetExceeded(f"{n} sets exceeds the orthogonalization bound {bound}")
    empty = VertexSet.empty(_universe_of(s for _, s in terms))
    atoms = []
    subsets = sorted(
        (I for size in range(1, n + 1) for I in combinations(range(n), size))
    )
    for I in subsets:
        coeff = sum((terms[i][0] for i in I), Fraction(0))
        if coeff == 0:
            continue
        b = terms[I[0]][1]
        for i in I[1:]:
            b = b & terms[i][1]
        cset = empty
        for i in range(n):
            if i not in I:
                cset = cset | terms[i][1]
        atom = OrthoAtom(b, cset, coeff)
        if not atom.set().is_empty():
            atoms.append(atom)
    return atoms


def partition_identity(sets: Sequence[VertexSet], universe: Universe | None = None) -> list[OrthoAtom]:
    """The 2^n atoms Q(meet over I, join off I), I ranging over all subsets (I empty first)."""
    universe = universe or _universe_of(sets)
    if universe is None:
        raise NoUnit("the full vertex set is not representable without a universe")
    sets = [s.with_universe(universe) if s.universe is None else s for s in sets]
    n = len(sets)
    if n > ORTHO_BOUND:
        raise BudgetExceeded(f"{n} sets exceeds the bound {ORTHO_BOUND}")
    full = VertexSet.full(universe)
    atoms = []
    for I in sorted(I for size in range(n + 1) for I in combinations(range(n), size)):
        b = full
        for i in I:
            b = b & sets[i]
        cset = VertexSet.empty(universe)
        for i in range(n):
            if i not in I:
                cset = cset | sets[i]
        atoms.append(OrthoAtom(b, cset, Fraction(1)))
    return atoms


def evaluate(c: Union[ProjectionCombo, Sequence[OrthoAtom]], v: str) -> Fraction:
    """Value at vertex v of the function represented by a combination or atom list."""
    if isinstance(c, ProjectionCombo):
        return sum((Fraction(k) for k, s in c.terms if v in s), Fraction(0))
    return sum((a.coefficient for a in c if v in a.B and v not in a.C), Fraction(0))


def regular_ideal_support(g) -> VertexSet:
    """Vertices emitting a finite nonzero number of edges (requires no sinks)."""
    sinks = g.sinks()
    if not sinks.is_empty():
        if sinks.cofinite:
            raise HasSinks(["all but finitely many vertices"])
        raise HasSinks(sort_names(sinks.support))
    return g.full() - g.infinite_emitters()
