"""Finite posets, order dimension (0 / 1 / 2+), suplim and closure,
realizations of dimension-<=1 posets, and transfers.

Elements are addressed by integer index internally and by name at the
boundaries.  Realization points live on exact rational coordinates so
the order on an inserted open interval is decided exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    BadCoordinateError,
    CycleDetectedError,
    DimensionTooHighError,
    NotClosedError,
    TransferUndefinedError,
)

__all__ = [
    "PosetDim",
    "FinPoset",
    "Vertex",
    "Edge",
    "Point",
    "RealizedPoset",
    "realize",
    "transfer_point",
    "alpha_v_formula",
]


class PosetDim(enum.Enum):
    ZERO = 0
    ONE = 1
    TWO_PLUS = 2

    def at_most_one(self) -> bool:
        return self is not PosetDim.TWO_PLUS


class FinPoset:
    """Finite poset given by Hasse covers; `leq` is their reflexive-transitive
    closure, and `covers` is always stored transitively reduced."""

    def __init__(self, names: Sequence[str], covers: Iterable[tuple[int, int]]):
        names = tuple(str(n) for n in names)
        if len(set(names)) != len(names):
            raise ValueError("poset element names must be distinct")
        self.names = names
        self.n = len(names)
        self._index = {name: i for i, name in enumerate(names)}
        leq = _closure_of_covers(self.n, covers)
        self.leq_matrix = leq
        self.covers = _transitive_reduction(leq)
        self._covered_by: dict[int, tuple[int, ...]] = {}
        for y, x in self.covers:
            self._covered_by.setdefault(x, ())
        cov: dict[int, list[int]] = {}
        for y, x in self.covers:
            cov.setdefault(x, []).append(y)
        self._covered_by = {x: tuple(sorted(ys)) for x, ys in cov.items()}
        self._dim: Optional[PosetDim] = None

    @classmethod
    def from_covers(cls, names: Sequence[str], covers: Iterable[tuple[str, str]]) -> "FinPoset":
        """Build from (y, x) name pairs meaning y is covered by x."""
        names = tuple(str(n) for n in names)
        idx = {n: i for i, n in enumerate(names)}
        pairs = []
        for y, x in covers:
            if y not in idx or x not in idx:
                raise ValueError(f"cover ({y!r}, {x!r}) mentions unknown element")
            pairs.append((idx[y], idx[x]))
        return cls(names, pairs)

    def index(self, name: str) -> int:
        return self._index[name]

    def leq(self, a: int, b: int) -> bool:
        return bool(self.leq_matrix[a, b])

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def covered_by(self, x: int) -> tuple[int, ...]:
        """P(x): the elements covered by x."""
        return self._covered_by.get(x, ())

    def down_set(self, x: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.leq_matrix[:, x])[0])

    def up_set(self, x: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.nonzero(self.leq_matrix[x, :])[0])

    def linear_extension(self) -> tuple[int, ...]:
        order = sorted(range(self.n), key=lambda i: (int(self.leq_matrix[:, i].sum()), i))
        return tuple(order)

    def dimension(self) -> PosetDim:
        if self._dim is None:
            self._dim = self._compute_dimension()
        return self._dim

    def _compute_dimension(self) -> PosetDim:
        leq = self.leq_matrix
        if not (leq.sum() > self.n):
            return PosetDim.ZERO
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if self.comparable(u, v):
                    continue
                below = leq[:, u] & leq[:, v]
                above = leq[u, :] & leq[v, :]
                if below.any() and above.any():
                    return PosetDim.TWO_PLUS
        return PosetDim.ONE

    def suplim(self, subset: Iterable[int]) -> tuple[int, ...]:
        """Minimal upper bounds of the subset."""
        ds = sorted(set(subset))
        if not ds:
            return ()
        bound = np.ones(self.n, dtype=bool)
        for d in ds:
            bound &= self.leq_matrix[d, :]
        ub = [int(i) for i in np.nonzero(bound)[0]]
        return tuple(u for u in ub if not any(v != u and self.leq(v, u) for v in ub))

    def closure(self, subset: Iterable[int]) -> tuple[int, ...]:
        """Least closed superset: fixpoint of suplim over subsets.

        For dimension <= 1 the pairwise suplims generate; otherwise all
        subsets of the current set are fed back in until stable.
        """
        current = set(subset)
        pairwise = self.dimension().at_most_one()
        while True:
            new = set(current)
            if pairwise:
                items = sorted(current)
                for i, a in enumerate(items):
                    new.update(self.suplim((a,)))
                    for b in items[i + 1 :]:
                        new.update(self.suplim((a, b)))
            else:
                items = sorted(current)
                if len(items) > 20:
                    raise ValueError("closure fixpoint over subsets limited to 20 elements")
                for mask in range(1, 1 << len(items)):
                    u = [items[k] for k in range(len(items)) if mask >> k & 1]
                    new.update(self.suplim(u))
            if new == current:
                return tuple(sorted(current))
            current = new

    def is_closed(self, subset: Iterable[int]) -> bool:
        sub = set(subset)
        return set(self.closure(sub)) == sub

    def restrict(self, subset: Sequence[int]) -> "FinPoset":
        """Full subposet on the given elements (induced order, reduced covers)."""
        subset = sorted(set(subset))
        pos = {e: i for i, e in enumerate(subset)}
        pairs = [
            (pos[a], pos[b])
            for a in subset
            for b in subset
            if a != b and self.leq(a, b)
        ]
        return FinPoset([self.names[e] for e in subset], pairs)

    def __repr__(self) -> str:
        return f"FinPoset({list(self.names)}, covers={[(self.names[y], self.names[x]) for y, x in self.covers]})"


def _closure_of_covers(n: int, covers: Iterable[tuple[int, int]]) -> np.ndarray:
    leq = np.eye(n, dtype=bool)
    pairs = set()
    for y, x in covers:
        if not (0 <= y < n and 0 <= x < n):
            raise ValueError(f"cover index out of range: {(y, x)}")
        if y == x:
            raise CycleDetectedError(f"self cover at element {y}")
        pairs.add((y, x))
    for y, x in pairs:
        leq[y, x] = True
    # Warshall closure.
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    for a in range(n):
        for b in range(a + 1, n):
            if leq[a, b] and leq[b, a]:
                raise CycleDetectedError(f"cover digraph has a cycle through {a} and {b}")
    return leq


def _transitive_reduction(leq: np.ndarray) -> tuple[tuple[int, int], ...]:
    n = leq.shape[0]
    covers = []
    for y in range(n):
        for x in range(n):
            if y == x or not leq[y, x]:
                continue
            if not any(k != y and k != x and leq[y, k] and leq[k, x] for k in range(n)):
                covers.append((y, x))
    return tuple(sorted(covers))


# --- realizations -----------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    q: str

    def __repr__(self) -> str:
        return f"Vertex({self.q})"


@dataclass(frozen=True)
class Edge:
    """A point on the open interval inserted into the cover bottom < top."""

    top: str
    bottom: str
    t: Fraction

    def __repr__(self) -> str:
        return f"Edge({self.top}, {self.bottom}, {self.t})"


Point = Union[Vertex, Edge]


def _point_key(base: FinPoset, z: Point):
    if isinstance(z, Vertex):
        return (0, base.index(z.q), 0, Fraction(0))
    return (1, base.index(z.top), base.index(z.bottom), z.t)


def point_leq(base: FinPoset, z: Point, w: Point) -> bool:
    """z <= w in the realization of `base`: either pi0(z) <= pi-1(w) in the
    base, or both projections agree and T(z) <= T(w)."""
    if isinstance(z, Vertex):
        z0 = zm1 = base.index(z.q)
        zt = Fraction(0)
    else:
        z0, zm1, zt = base.index(z.top), base.index(z.bottom), z.t
    if isinstance(w, Vertex):
        w0 = wm1 = base.index(w.q)
        wt = Fraction(0)
    else:
        w0, wm1, wt = base.index(w.top), base.index(w.bottom), w.t
    if base.leq(z0, wm1):
        return True
    return z0 == w0 and zm1 == wm1 and zt <= wt


def _check_coordinate(t: Fraction) -> Fraction:
    t = Fraction(t)
    if not (Fraction(-1) < t < Fraction(0)):
        raise BadCoordinateError(f"edge coordinate {t} is not in (-1, 0)")
    return t


def point_name(z: Point) -> str:
    if isinstance(z, Vertex):
        return z.q
    return f"{z.top}~{z.bottom}~{z.t.numerator}/{z.t.denominator}"


class RealizedPoset(FinPoset):
    """Finite full subposet of the realization of a dimension-<=1 poset,
    spanned by the vertices of a closed subset D and the edge points of
    its covers at coordinates V."""

    def __init__(self, base: FinPoset, d_subset: Sequence[int], vset: Sequence[Fraction]):
        if not base.dimension().at_most_one():
            raise DimensionTooHighError("realization requires a poset of dimension at most 1")
        d_subset = tuple(sorted(set(d_subset)))
        if not base.is_closed(d_subset):
            raise NotClosedError("realization subset must be closed under suplim")
        vset = tuple(sorted(set(_check_coordinate(v) for v in vset)))
        points: list[Point] = [Vertex(base.names[q]) for q in d_subset]
        for x in d_subset:
            for y in base.covered_by(x):
                for v in vset:
                    points.append(Edge(base.names[x], base.names[y], v))
        points.sort(key=lambda z: _point_key(base, z))
        pairs = []
        for i, z in enumerate(points):
            for j, w in enumerate(points):
                if i != j and point_leq(base, z, w):
                    pairs.append((i, j))
        super().__init__([point_name(z) for z in points], pairs)
        self.base = base
        self.d_subset = d_subset
        self.vset = vset
        self.points = tuple(points)

    def point_index(self, z: Point) -> Optional[int]:
        try:
            return self.index(point_name(z))
        except KeyError:
            return None

    def transfer(self, z: Point) -> Optional[Point]:
        """Transfer of the inclusion into the ambient realization: the greatest
        point of this poset below the (symbolic) query, or None for -infinity."""
        if isinstance(z, Edge):
            _check_coordinate(z.t)
            if self.base.index(z.bottom) not in self.base.covered_by(self.base.index(z.top)):
                raise ValueError(f"{z!r} does not lie on a cover of the base poset")
        below = [i for i, d in enumerate(self.points) if point_leq(self.base, d, z)]
        if not below:
            return None
        maxima = [
            i
            for i in below
            if not any(j != i and point_leq(self.base, self.points[i], self.points[j]) for j in below)
        ]
        if len(maxima) != 1:
            raise TransferUndefinedError(f"no greatest element below {z!r}")
        return self.points[maxima[0]]


def realize(base: FinPoset, d_subset: Optional[Sequence[str]] = None, vset: Sequence[Fraction] = ()) -> RealizedPoset:
    """S(Q, D, V): vertices of the closed subset D plus edge points of its
    covers at every coordinate of V.  D defaults to all of Q."""
    if d_subset is None:
        idx = range(base.n)
    else:
        idx = [base.index(n) for n in d_subset]
    return RealizedPoset(base, list(idx), list(vset))


def alpha_v_formula(base: FinPoset, vset: Sequence[Fraction], z: Point) -> Point:
    """Closed-form transfer onto S(Q, V): vertices stay fixed; an edge point
    drops to the greatest coordinate of V below it, or to its bottom vertex."""
    if isinstance(z, Vertex):
        return z
    below = [v for v in sorted(set(Fraction(v) for v in vset)) if v <= z.t]
    if not below:
        return Vertex(z.bottom)
    return Edge(z.top, z.bottom, max(below))


def transfer_point(amb: FinPoset, sub: Sequence[int], z: int) -> Optional[int]:
    """Greatest element of {d in sub : d <= z} in a finite ambient poset.

    Returns None (bottom) when the set is empty and raises
    TransferUndefinedError when it has several maximal elements.
    """
    members = sorted(set(sub))
    below = [d for d in members if amb.leq(d, z)]
    if not below:
        return None
    maxima = [d for d in below if not any(e != d and amb.leq(d, e) for e in below)]
    if len(maxima) != 1:
        raise TransferUndefinedError(
            f"no greatest element of the subposet below {amb.names[z]!r}"
        )
    return maxima[0]
