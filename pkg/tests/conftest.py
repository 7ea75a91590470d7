"""Shared fixtures and random-instance generators for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from tamechain.field import Mat, kernel
from tamechain.posets import FinPoset
from tamechain.functors import (
    NatMap,
    VectFunctor,
    assemble_free_map,
    coker_functor,
    free_on_generators,
)
from tamechain.chains import ChainFunctor


@pytest.fixture
def zigzag():
    # a1 -> a2 -> a4 <- a3
    return FinPoset.from_covers(
        ["a1", "a2", "a3", "a4"], [("a1", "a2"), ("a2", "a4"), ("a3", "a4")]
    )


@pytest.fixture
def fence():
    # b1, b2 both below b3 and b4
    return FinPoset.from_covers(
        ["b1", "b2", "b3", "b4"],
        [("b1", "b3"), ("b1", "b4"), ("b2", "b3"), ("b2", "b4")],
    )


@pytest.fixture
def diamond():
    return FinPoset.from_covers(
        ["c1", "c2", "c3", "c4"],
        [("c1", "c2"), ("c1", "c3"), ("c2", "c4"), ("c3", "c4")],
    )


@pytest.fixture
def chain2():
    return FinPoset.from_covers(["a", "b"], [("a", "b")])


@pytest.fixture
def chain3():
    return FinPoset.from_covers(["0", "1", "2"], [("0", "1"), ("1", "2")])


@pytest.fixture
def point():
    return FinPoset.from_covers(["*"], [])


def random_matrix(rng: random.Random, rows: int, cols: int, p: int) -> Mat:
    if rows == 0 or cols == 0:
        return Mat.zeros(rows, cols, p)
    return Mat([[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], p)


def random_invertible(rng: random.Random, n: int, p: int) -> Mat:
    while True:
        m = random_matrix(rng, n, n, p)
        if m.rank() == n:
            return m


def random_dim1_poset(rng: random.Random, max_elements: int) -> FinPoset:
    """Random poset of dimension <= 1 (rejection sampling on the covers)."""
    n = rng.randint(1, max_elements)
    names = [f"e{i}" for i in range(n)]
    while True:
        covers = []
        for j in range(1, n):
            for i in range(j):
                if rng.random() < 1.8 / n:
                    covers.append((names[i], names[j]))
        try:
            P = FinPoset.from_covers(names, covers)
        except Exception:
            continue
        if P.dimension().at_most_one():
            return P


def random_poset(rng: random.Random, max_elements: int) -> FinPoset:
    n = rng.randint(2, max_elements)
    names = [f"e{i}" for i in range(n)]
    covers = []
    for j in range(1, n):
        for i in range(j):
            if rng.random() < 2.2 / n:
                covers.append((names[i], names[j]))
    return FinPoset.from_covers(names, covers)


def random_functor(rng: random.Random, poset: FinPoset, p: int, max_dim: int = 3) -> VectFunctor:
    """Random functor presented as the cokernel of a map between frees;
    valid on posets of any dimension."""
    gens0 = [(z, rng.randint(0, max_dim)) for z in range(poset.n)]
    gens0 = [(z, d) for z, d in gens0 if d]
    if not gens0:
        gens0 = [(rng.randrange(poset.n), 1)]
    F0 = free_on_generators(poset, gens0, p)
    gens1 = [(z, rng.randint(0, 1)) for z in range(poset.n)]
    gens1 = [(z, d) for z, d in gens1 if d]
    F1 = free_on_generators(poset, gens1, p)
    values = [random_matrix(rng, F0.dims[z], d, p) for z, d in F1.generators]
    rel = assemble_free_map(F1, F0, values)
    Q, _ = coker_functor(rel)
    return Q


def random_functor_dim1(rng: random.Random, poset: FinPoset, p: int, max_dim: int = 3) -> VectFunctor:
    """Random functor with free cover matrices; needs dimension <= 1."""
    dims = [rng.randint(0, max_dim) for _ in range(poset.n)]
    maps = {
        (y, x): random_matrix(rng, dims[x], dims[y], p) for y, x in poset.covers
    }
    return VectFunctor(poset, dims, maps, p)


def random_nat_in_kernel(rng: random.Random, basis: list, constraint, p: int):
    """Random combination of hom-basis elements killed by the constraint
    (a linear functional on maps: returns a flat vector per basis map)."""
    if not basis:
        return None
    vecs = [constraint(b) for b in basis]
    M = Mat(np.stack(vecs, axis=0).T if vecs[0].size else np.zeros((0, len(basis)), dtype=np.int64), p)
    K = kernel(M)
    if K.cols == 0:
        return None
    coeffs = None
    for _ in range(20):
        c = [rng.randrange(p) for _ in range(K.cols)]
        if any(c):
            coeffs = c
            break
    if coeffs is None:
        return None
    flat = K.arr @ np.array(coeffs, dtype=np.int64) % p
    return [int(v) for v in flat]


def conjugate_chain(rng: random.Random, X: ChainFunctor) -> ChainFunctor:
    """Random change of basis at every element and degree."""
    p = X.p
    U = [
        [random_invertible(rng, X.dims[q][n], p) for n in range(X.top + 1)]
        for q in range(X.poset.n)
    ]
    from tamechain.field import inverse

    Uinv = [[inverse(m) for m in row] for row in U]
    dims = [list(row) for row in X.dims]
    bdy = [
        [U[q][n] @ X.boundaries[q][n] @ Uinv[q][n + 1] for n in range(X.top)]
        for q in range(X.poset.n)
    ]
    maps = {
        (y, x): [U[x][n] @ X.maps[(y, x)][n] @ Uinv[y][n] for n in range(X.top + 1)]
        for y, x in X.poset.covers
    }
    return ChainFunctor(X.poset, dims, bdy, maps, p)
