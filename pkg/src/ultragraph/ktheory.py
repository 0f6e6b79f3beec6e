"""Integer linear algebra for K-groups of Exel-Laca algebras.

K0 = coker(A^t - I) and K1 = ker(A^t - I), computed from a Smith normal form
over Python integers (arbitrary precision).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotEventuallyConstant
from .symbolic import SymbolicMatrix

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose_minus_identity(a: Sequence[Sequence[int]]) -> Matrix:
    n = len(a)
    return [[a[j][i] - (i == j) for j in range(n)] for i in range(n)]


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if n else 1


@dataclass(frozen=True)
class SmithForm:
    D: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0])))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithForm:
    """Unimodular U, V with U M V = D diagonal and d1 | d2 | ... (verified)."""
    a = [list(map(int, r)) for r in m]
    rows, cols = len(a), len(a[0]) if a else 0
    if rows == 0 or cols == 0:
        raise ValueError("matrix must have positive dimensions")
    u, v = _identity(rows), _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            piv = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    form = SmithForm(tuple(map(tuple, a)), tuple(map(tuple, u)), tuple(map(tuple, v)))
    _verify(m, form)
    return form


def _verify(m, form: SmithForm) -> None:
    d = form.D
    if matmul(matmul(form.U, m), form.V) != [list(r) for r in d]:
        raise AssertionError("U M V != D")
    rows, cols = len(d), len(d[0])
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        raise AssertionError("D is not diagonal")
    diag = form.diagonal
    nz = [x for x in diag if x]
    if diag[: len(nz)] != nz or any(x < 0 for x in diag):
        raise AssertionError("zero diagonal entries must trail")
    if any(b % a for a, b in zip(nz, nz[1:])):
        raise AssertionError("divisibility chain fails")


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by the vectors."""
    a = [list(x) for x in vectors if any(x)]
    if not a:
        return []
    width = len(a[0])
    out: list[list[int]] = []
    col = 0
    while a and col < width:
        nz = [r for r in a if r[col]]
        rest = [r for r in a if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            nxt = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                (nxt if r[col] else rest).append(r)
            nz = nxt
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        for i, r in enumerate(out):
            q = r[col] // p[col]
            out[i] = [x - q * y for x, y in zip(r, p)]
        out.append(p)
        a = [r for r in rest if any(r)]
        col += 1
    return out


def canonical_kernel_basis(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Hermite basis taken from the high coordinates down.

    Each vector ends with a positive pivot at its largest nonzero coordinate and
    the other basis vectors vanish at that coordinate. Sorted by pivot position.
    """
    rev = [list(reversed(x)) for x in vectors]
    basis = [tuple(reversed(r)) for r in hermite_rows(rev)]
    return sorted(basis, key=lambda x: max(i for i, c in enumerate(x) if c))


def kernel_basis(m: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    form = smith_normal_form(m)
    r = form.rank
    cols = len(m[0])
    vecs = [[form.V[i][j] for i in range(cols)] for j in range(r, cols)]
    return canonical_kernel_basis(vecs)


@dataclass(frozen=True)
class KGroups:
    k0_invariant_factors: tuple[int, ...]
    k0_free_rank: int
    k1_free_rank: int
    k1_basis: tuple[tuple[int, ...], ...]

    def describe(self) -> tuple[str, str]:
        def show(free: int, tors: Sequence[int]) -> str:
            parts = [f"Z/{d}" for d in tors] + ["Z"] * free
            return " + ".join(parts) if parts else "0"
        return show(self.k0_free_rank, self.k0_invariant_factors), show(self.k1_free_rank, ())

    def to_dict(self) -> dict:
        k0, k1 = self.describe()
        return {
            "K0": k0, "K1": k1,
            "k0_invariant_factors": list(self.k0_invariant_factors),
            "k0_free_rank": self.k0_free_rank,
            "k1_free_rank": self.k1_free_rank,
            "k1_basis": [list(x) for x in self.k1_basis],
        }


def k_groups(a: Sequence[Sequence[int]]) -> KGroups:
    """K-groups of O_A for a finite {0,1} matrix A."""
    rows = [list(r) for r in a]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows) or any(x not in (0, 1) for r in rows for x in r):
        raise ValueError("expected a nonempty square {0,1} matrix")
    m = transpose_minus_identity(rows)
    form = smith_normal_form(m)
    diag = form.diagonal
    basis = kernel_basis(m)
    for x in basis:
        if any(sum(c * y for c, y in zip(row, x)) for row in m):
            raise AssertionError("kernel vector check failed")
    return KGroups(
        tuple(d for d in diag if d > 1),
        n - form.rank,
        n - form.rank,
        tuple(basis),
    )


# ---------------------------------------------------------------- infinite matrices
@dataclass(frozen=True)
class TruncationStep:
    size: int
    rank: int
    basis: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class StabilizationReport:
    steps: tuple[TruncationStep, ...]
    margin: int
    stabilized: bool
    rank: int | None
    basis: tuple[tuple[int, ...], ...]
    status: str = "stabilized"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "margin": self.margin,
            "rank": self.rank,
            "basis": [list(x) for x in self.basis],
            "steps": [{"size": s.size, "rank": s.rank, "basis": [list(x) for x in s.basis]} for s in self.steps],
        }


def _trim(x: Sequence[int]) -> tuple[int, ...]:
    x = list(x)
    while x and x[-1] == 0:
        x.pop()
    return tuple(x)


def truncated_kernel_stabilization(a: SymbolicMatrix, sizes: Sequence[int]) -> StabilizationReport:
    """Kernel of the N x N truncation of A^t - I on vectors supported in the first N-K+1 slots.

    K = (largest family reach) + 1 keeps the truncation boundary away from the
    supported coordinates.
    """
    margin = a.reach() + 1
    steps = []
    for size in sizes:
        m = transpose_minus_identity(a.truncate(size))
        width = size - margin + 1
        if width <= 0:
            raise ValueError(f"size {size} is too small for margin {margin}")
        sub = [row[:width] for row in m]
        basis = kernel_basis(sub)
        steps.append(TruncationStep(size, len(basis), tuple(_trim(x) for x in basis)))
    ranks = {s.rank for s in steps}
    bases = {s.basis for s in steps}
    ok = len(ranks) == 1 and len(bases) == 1
    if not ok:
        return StabilizationReport(tuple(steps), margin, False, None, (), "NotStabilized")
    return StabilizationReport(tuple(steps), margin, True, steps[0].rank, steps[0].basis)


@dataclass(frozen=True)
class EventuallyConstantVector:
    """Integer vector indexed from ``start``: prefix values, then tail_value forever."""

    prefix: tuple[int, ...]
    tail_value: int = 0
    start: int = 0

    def __post_init__(self):
        p = list(self.prefix)
        while p and p[-1] == self.tail_value:
            p.pop()
        object.__setattr__(self, "prefix", tuple(p))

    @staticmethod
    def delta(i: int, start: int = 0) -> "EventuallyConstantVector":
        return EventuallyConstantVector(tuple(int(k == i) for k in range(start, i + 1)), 0, start)

    def __getitem__(self, i: int) -> int:
        k = i - self.start
        if k < 0:
            raise IndexError(i)
        return self.prefix[k] if k < len(self.prefix) else self.tail_value

    def support_end(self) -> int:
        return self.start + len(self.prefix)


@dataclass(frozen=True)
class SymbolicIntMatrix:
    """scale * (A^t if transpose else A) + shift * I for a symbolic {0,1} matrix A."""

    base: SymbolicMatrix
    transpose: bool = True
    scale: int = 1
    shift: int = 0

    def entry(self, i: int, j: int) -> int:
        aij = self.base.entry(j, i) if self.transpose else self.base.entry(i, j)
        return self.scale * aij + self.shift * (i == j)


def symbolic_transpose_minus_identity(a: SymbolicMatrix) -> SymbolicIntMatrix:
    return SymbolicIntMatrix(a, True, 1, -1)


def apply_symbolic(m: SymbolicIntMatrix, x: EventuallyConstantVector) -> EventuallyConstantVector:
    """Exact product m x; the answer must be eventually constant."""
    a = m.base
    start = a.index_start
    if x.start != start:
        raise ValueError("vector and matrix use different index starts")
    if x.tail_value and m.scale:
        raise NotEventuallyConstant("infinite sums: the input has an infinite support")
    supp = [j for j in range(start, x.support_end()) if x[j]]

    def y(i: int) -> int:
        acc = m.shift * x[i]
        if m.scale:
            for j in supp:
                aij = a.entry(j, i) if m.transpose else a.entry(i, j)
                acc += m.scale * aij * x[j]
        return acc

    bound = max(a._explicit_max(), x.support_end()) + a.reach() + 2
    tail = y(bound)
    for i in range(bound + 1, bound + 2 * a.reach() + 4):
        if y(i) != tail:
            raise NotEventuallyConstant("product is not constant past the explicit region")
    return EventuallyConstantVector(tuple(y(i) for i in range(start, bound)), tail, start)


# ---------------------------------------------------------------- obstruction
def graph_algebra_rank_obstruction(k0_rank: int, k1_rank: int) -> bool:
    """Necessary condition rank K1 <= rank K0 for a unital graph algebra."""
    if k0_rank < 0 or k1_rank < 0:
        raise ValueError("ranks are nonnegative")
    return k1_rank <= k0_rank


@dataclass(frozen=True)
class SixTermReport:
    ideal: tuple[int, int]
    quotient: tuple[int, int]
    rank_difference: int  # rank K1(E) - rank K0(E)
    k0_less_than_k1: bool
    feasible: tuple[tuple[int, int], ...]
    graph_algebra_possible: bool
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "ideal": list(self.ideal), "quotient": list(self.quotient),
            "rank_difference": self.rank_difference,
            "k0_less_than_k1": self.k0_less_than_k1,
            "feasible": [list(p) for p in self.feasible],
            "graph_algebra_possible": self.graph_algebra_possible,
        }


def six_term_rank_report(ideal: tuple[int, int], quotient: tuple[int, int]) -> SixTermReport:
    """Rank bookkeeping for the six-term sequence of 0 -> I -> E -> E/I -> 0.

    Exactness makes the alternating rank sum vanish, so
    rank K1(E) - rank K0(E) = (i1 - i0) + (q1 - q0); each middle group also has
    rank at most the sum of its neighbours.
    """
    i0, i1 = ideal
    q0, q1 = quotient
    diff = (i1 - i0) + (q1 - q0)
    feasible = tuple(
        (e0, e0 + diff)
        for e0 in range(0, i0 + q0 + 1)
        if 0 <= e0 + diff <= i1 + q1
    )
    possible = any(graph_algebra_rank_obstruction(e0, e1) for e0, e1 in feasible)
    return SixTermReport(tuple(ideal), tuple(quotient), diff, diff > 0, feasible, possible)
