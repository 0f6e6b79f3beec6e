"""Exact finite/cofinite vertex sets.

A universe is either a finite set of names or a tail universe: a finite set of
exceptional names plus the infinite family ``prefix + str(k)`` for ``k >= start``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .errors import UniverseMismatch

_DIGITS = re.compile(r"(\d+)")


@lru_cache(maxsize=65536)
def natural_key(name: str) -> tuple:
    """Sort key treating digit runs numerically: v2 < v10, g[2] < g[10]."""
    parts = _DIGITS.split(name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def sort_names(names: Iterable[str]) -> list[str]:
    return sorted(names, key=natural_key)


@dataclass(frozen=True)
class FiniteUniverse:
    vertices: frozenset[str]

    is_infinite = False

    def __contains__(self, v: str) -> bool:
        return v in self.vertices

    def ordered(self) -> list[str]:
        return sort_names(self.vertices)


@dataclass(frozen=True)
class TailUniverse:
    exceptional: frozenset[str]
    prefix: str
    start: int

    is_infinite = True

    @staticmethod
    def make(exceptional: Iterable[str], prefix: str, start: int) -> "TailUniverse":
        """Normalize by absorbing exceptional names that continue the tail downward."""
        exc = set(exceptional)
        while start > 0 and f"{prefix}{start - 1}" in exc:
            exc.discard(f"{prefix}{start - 1}")
            start -= 1
        return TailUniverse(frozenset(exc), prefix, start)

    def index(self, v: str) -> int | None:
        """Tail index of ``v`` or None when ``v`` is not a tail vertex."""
        if v in self.exceptional or not v.startswith(self.prefix):
            return None
        rest = v[len(self.prefix):]
        if not rest.isdigit() or (len(rest) > 1 and rest[0] == "0"):
            return None
        k = int(rest)
        return k if k >= self.start else None

    def name(self, k: int) -> str:
        return f"{self.prefix}{k}"

    def ref(self, k: int) -> str | None:
        """Resolve ``prefix[k]``: a tail vertex, an exceptional vertex, or None."""
        nm = f"{self.prefix}{k}"
        if k >= self.start or nm in self.exceptional:
            return nm
        return None

    def __contains__(self, v: str) -> bool:
        return v in self.exceptional or self.index(v) is not None

    def ordered_exceptional(self) -> list[str]:
        return sort_names(self.exceptional)


Universe = Union[FiniteUniverse, TailUniverse]


@dataclass(frozen=True)
class VertexSet:
    """Finite set (``cofinite=False``) or complement of a finite set.

    ``universe`` may be None for universe-agnostic finite sets; binary
    operations adopt the universe of the other operand.
    """

    support: frozenset[str]
    cofinite: bool = False
    universe: Universe | None = None

    def __post_init__(self):
        if self.cofinite:
            if self.universe is None or not self.universe.is_infinite:
                raise UniverseMismatch("cofinite sets need an infinite universe")
        if self.universe is not None:
            bad = [v for v in self.support if v not in self.universe]
            if bad:
                raise UniverseMismatch(f"vertices outside universe: {sort_names(bad)}")

    # constructors
    @staticmethod
    def finite(items: Iterable[str] = (), universe: Universe | None = None) -> "VertexSet":
        return VertexSet(frozenset(items), False, universe)

    @staticmethod
    def cofinite_of(excluded: Iterable[str], universe: Universe) -> "VertexSet":
        excluded = frozenset(excluded)
        if not universe.is_infinite:
            return VertexSet(universe.vertices - excluded, False, universe)
        return VertexSet(excluded, True, universe)

    @staticmethod
    def full(universe: Universe) -> "VertexSet":
        return VertexSet.cofinite_of((), universe)

    @staticmethod
    def empty(universe: Universe | None = None) -> "VertexSet":
        return VertexSet(frozenset(), False, universe)

    # queries
    @property
    def polarity(self) -> str:
        return "Cofinite" if self.cofinite else "Finite"

    def is_finite(self) -> bool:
        return not self.cofinite

    def is_empty(self) -> bool:
        return not self.cofinite and not self.support

    def __contains__(self, v: str) -> bool:
        if self.cofinite:
            return v not in self.support and v in self.universe
        return v in self.support

    member = __contains__

    def __iter__(self) -> Iterator[str]:
        if self.cofinite:
            raise TypeError("cannot iterate a cofinite set")
        return iter(sort_names(self.support))

    def __len__(self) -> int:
        if self.cofinite:
            raise TypeError("cofinite set has no finite length")
        return len(self.support)

    def members(self) -> list[str]:
        return list(self)

    def is_full(self) -> bool:
        if self.universe is None:
            return False
        if self.cofinite:
            return not self.support
        if self.universe.is_infinite:
            return False
        return self.support == self.universe.vertices

    # algebra
    def _common(self, other: "VertexSet") -> Universe | None:
        a, b = self.universe, other.universe
        if a is None:
            if b is not None:
                _check_inside(self, b)
            return b
        if b is None:
            _check_inside(other, a)
            return a
        if a != b:
            raise UniverseMismatch("operands live in different universes")
        return a

    def union(self, other: "VertexSet") -> "VertexSet":
        u = self._common(other)
        a, b = self.support, other.support
        if not self.cofinite and not other.cofinite:
            return VertexSet(a | b, False, u)
        if self.cofinite and other.cofinite:
            return VertexSet(a & b, True, u)
        fin, cof = (a, b) if other.cofinite else (b, a)
        return VertexSet(cof - fin, True, u)

    def intersect(self, other: "VertexSet") -> "VertexSet":
        u = self._common(other)
        a, b = self.support, other.support
        if not self.cofinite and not other.cofinite:
            return VertexSet(a & b, False, u)
        if self.cofinite and other.cofinite:
            return VertexSet(a | b, True, u)
        fin, cof = (a, b) if other.cofinite else (b, a)
        return VertexSet(fin - cof, False, u)

    def difference(self, other: "VertexSet") -> "VertexSet":
        u = self._common(other)
        a, b = self.support, other.support
        if not self.cofinite and not other.cofinite:
            return VertexSet(a - b, False, u)
        if not self.cofinite and other.cofinite:
            return VertexSet(a & b, False, u)
        if self.cofinite and not other.cofinite:
            return VertexSet(a | b, True, u)
        return VertexSet(b - a, False, u)

    def is_subset(self, other: "VertexSet") -> bool:
        self._common(other)
        a, b = self.support, other.support
        if not self.cofinite:
            return not (a & b) if other.cofinite else a <= b
        if not other.cofinite:
            return False
        return b <= a

    def complement(self) -> "VertexSet":
        if self.universe is None:
            raise UniverseMismatch("complement needs a universe")
        if not self.universe.is_infinite:
            return VertexSet(self.universe.vertices - self.support, False, self.universe)
        return VertexSet(self.support, not self.cofinite, self.universe)

    def with_universe(self, universe: Universe) -> "VertexSet":
        if self.universe == universe:
            return self
        return VertexSet(self.support, self.cofinite, universe)

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __le__ = is_subset

    def max_tail_index(self) -> int | None:
        """Largest tail index appearing in the support (tail universes only)."""
        u = self.universe
        if not isinstance(u, TailUniverse):
            return None
        idx = [u.index(v) for v in self.support]
        idx = [k for k in idx if k is not None]
        return max(idx) if idx else None

    def to_dict(self) -> dict:
        return {"polarity": self.polarity, "support": sort_names(self.support)}

    def __str__(self) -> str:
        body = " ".join(sort_names(self.support))
        return ("~{" if self.cofinite else "{") + (f" {body} " if body else " ") + "}"


def _check_inside(s: VertexSet, u: Universe) -> None:
    bad = [v for v in s.support if v not in u]
    if bad:
        raise UniverseMismatch(f"vertices outside universe: {sort_names(bad)}")
