"""Exact dense linear algebra over a prime field F_p.

Matrices are immutable, entries are canonical residues in [0, p), and
every operation is deterministic: pivots are chosen leftmost-first and
free variables are set to zero, so identical inputs give bit-identical
outputs.  Zero-dimensional shapes (0 x n, n x 0) are first-class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoSolutionError

__all__ = [
    "Mat",
    "Rref",
    "KernelCokernel",
    "Pullback",
    "Pushout",
    "rref",
    "kernel",
    "cokernel",
    "kernel_and_cokernel",
    "solve",
    "solve_or_none",
    "inverse",
    "pullback",
    "pushout",
]

_CHECKED_PRIMES: set[int] = set()


def _check_modulus(p) -> int:
    p = int(p)
    if p in _CHECKED_PRIMES:
        return p
    if p < 2 or p >= 2**31:
        raise ValueError(f"field modulus must satisfy 2 <= p < 2**31, got {p}")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"field modulus {p} is not prime")
        d += 1
    _CHECKED_PRIMES.add(p)
    return p


def _same_field(a: "Mat", b: "Mat") -> int:
    if a.p != b.p:
        raise ValueError(f"field mismatch: {a.p} vs {b.p}")
    return a.p


class Mat:
    """Immutable dense matrix over F_p."""

    __slots__ = ("arr", "p")

    def __init__(self, entries, p: int):
        p = _check_modulus(p)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim == 1:
            # A flat list is only unambiguous when empty.
            if arr.size:
                raise ValueError("matrix entries must be a list of rows")
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError(f"matrix entries must be 2-dimensional, got shape {arr.shape}")
        arr = arr % p
        arr.flags.writeable = False
        self.arr = arr
        self.p = p

    @classmethod
    def _wrap(cls, arr: np.ndarray, p: int) -> "Mat":
        m = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.flags.writeable = False
        m.arr = arr
        m.p = p
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "Mat":
        p = _check_modulus(p)
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "Mat":
        p = _check_modulus(p)
        return cls._wrap(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.arr.shape[0]

    @property
    def cols(self) -> int:
        return self.arr.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.arr.shape

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.arr]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.arr, other.arr))

    def __hash__(self):
        return hash((self.p, self.shape, self.arr.tobytes()))

    def __repr__(self) -> str:
        return f"Mat({self.tolist()}, p={self.p})"

    def __add__(self, other: "Mat") -> "Mat":
        p = _same_field(self, other)
        return Mat._wrap((self.arr + other.arr) % p, p)

    def __sub__(self, other: "Mat") -> "Mat":
        p = _same_field(self, other)
        return Mat._wrap((self.arr - other.arr) % p, p)

    def __neg__(self) -> "Mat":
        return Mat._wrap((-self.arr) % self.p, self.p)

    def scale(self, c: int) -> "Mat":
        return Mat._wrap((self.arr * (int(c) % self.p)) % self.p, self.p)

    def __matmul__(self, other: "Mat") -> "Mat":
        p = _same_field(self, other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch for product: {self.shape} @ {other.shape}")
        return Mat._wrap(_matmul(self.arr, other.arr, p), p)

    def transpose(self) -> "Mat":
        return Mat._wrap(self.arr.T.copy(), self.p)

    def take_rows(self, idx) -> "Mat":
        return Mat._wrap(self.arr[list(idx), :].copy(), self.p)

    def take_cols(self, idx) -> "Mat":
        return Mat._wrap(self.arr[:, list(idx)].copy(), self.p)

    def is_zero(self) -> bool:
        return not self.arr.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and bool(np.array_equal(self.arr, np.eye(self.rows, dtype=np.int64)))

    def rank(self) -> int:
        return len(rref(self).pivots)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    @staticmethod
    def hstack(mats: list["Mat"]) -> "Mat":
        if not mats:
            raise ValueError("hstack of no matrices")
        p = mats[0].p
        for m in mats:
            _same_field(mats[0], m)
        return Mat._wrap(np.hstack([m.arr for m in mats]), p)

    @staticmethod
    def vstack(mats: list["Mat"]) -> "Mat":
        if not mats:
            raise ValueError("vstack of no matrices")
        p = mats[0].p
        for m in mats:
            _same_field(mats[0], m)
        return Mat._wrap(np.vstack([m.arr for m in mats]), p)

    @staticmethod
    def block_diag(mats: list["Mat"], p: int) -> "Mat":
        rows = sum(m.rows for m in mats)
        cols = sum(m.cols for m in mats)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for m in mats:
            out[r : r + m.rows, c : c + m.cols] = m.arr
            r += m.rows
            c += m.cols
        return Mat._wrap(out, p)


def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # Keep int64 accumulation below 2**62: reduce every `step` inner terms.
    step = max(1, int(2**62 // max(1, (p - 1) ** 2)))
    if inner <= step:
        return (a @ b) % p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(0, inner, step):
        acc = (acc + a[:, k : k + step] @ b[k : k + step, :]) % p
    return acc


@dataclass(frozen=True)
class Rref:
    """Reduced row-echelon form R with pivot columns and transform T M = R."""

    R: Mat
    pivots: tuple[int, ...]
    T: Mat

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(M: Mat) -> Rref:
    p = M.p
    R = M.arr.copy()
    T = np.eye(M.rows, dtype=np.int64)
    pivots: list[int] = []
    r = 0
    for c in range(M.cols):
        if r == M.rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
            T[[r, i]] = T[[i, r]]
        piv = int(R[r, c])
        if piv != 1:
            inv = pow(piv, p - 2, p)
            R[r] = (R[r] * inv) % p
            T[r] = (T[r] * inv) % p
        factors = R[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            R[hit] = (R[hit] - np.outer(factors[hit], R[r])) % p
            T[hit] = (T[hit] - np.outer(factors[hit], T[r])) % p
        pivots.append(c)
        r += 1
    return Rref(Mat._wrap(R, p), tuple(pivots), Mat._wrap(T, p))


def kernel(M: Mat) -> Mat:
    """Canonical basis of ker M as columns; full column rank cols - rank."""
    rr = rref(M)
    p = M.p
    free = [c for c in range(M.cols) if c not in set(rr.pivots)]
    K = np.zeros((M.cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        K[fc, j] = 1
        for i, pc in enumerate(rr.pivots):
            K[pc, j] = (-int(rr.R.arr[i, fc])) % p
    return Mat._wrap(K, p)


def cokernel(M: Mat) -> tuple[Mat, Mat]:
    """(C, section): C M = 0, C surjective of rank rows - rank(M), C section = id."""
    rr = rref(M)
    C = rr.T.take_rows(range(rr.rank, M.rows))
    section = solve(C, Mat.identity(C.rows, M.p))
    return C, section


@dataclass(frozen=True)
class KernelCokernel:
    kernel: Mat
    coker_proj: Mat
    coker_section: Mat


def kernel_and_cokernel(M: Mat) -> KernelCokernel:
    C, section = cokernel(M)
    return KernelCokernel(kernel(M), C, section)


def solve(A: Mat, B: Mat) -> Mat:
    """Canonical X with A X = B (free variables zero); raises NoSolutionError."""
    X = solve_or_none(A, B)
    if X is None:
        raise NoSolutionError(f"system of shape {A.shape} has no solution")
    return X


def solve_or_none(A: Mat, B: Mat):
    p = _same_field(A, B)
    if A.rows != B.rows:
        raise ValueError(f"row mismatch in solve: {A.shape} vs {B.shape}")
    rr = rref(Mat.hstack([A, B]))
    X = np.zeros((A.cols, B.cols), dtype=np.int64)
    for i, c in enumerate(rr.pivots):
        if c >= A.cols:
            return None
        X[c] = rr.R.arr[i, A.cols :]
    return Mat._wrap(X, p)


def inverse(M: Mat) -> Mat:
    if M.rows != M.cols:
        raise ValueError(f"cannot invert non-square matrix of shape {M.shape}")
    rr = rref(M)
    if rr.rank != M.rows:
        raise NoSolutionError(f"matrix of shape {M.shape} is singular (rank {rr.rank})")
    return rr.T


@dataclass(frozen=True)
class Pullback:
    """ker [f | -g] with its two block projections out of the pullback space."""

    dim: int
    to_left: Mat
    to_right: Mat


def pullback(f: Mat, g: Mat) -> Pullback:
    _same_field(f, g)
    if f.rows != g.rows:
        raise ValueError(f"pullback requires equal codomains: {f.shape} vs {g.shape}")
    K = kernel(Mat.hstack([f, -g]))
    return Pullback(K.cols, K.take_rows(range(f.cols)), K.take_rows(range(f.cols, f.cols + g.cols)))


@dataclass(frozen=True)
class Pushout:
    """coker [f ; -g] with its two block injections into the pushout space."""

    dim: int
    from_left: Mat
    from_right: Mat


def pushout(f: Mat, g: Mat) -> Pushout:
    _same_field(f, g)
    if f.cols != g.cols:
        raise ValueError(f"pushout requires equal domains: {f.shape} vs {g.shape}")
    C, _ = cokernel(Mat.vstack([f, -g]))
    return Pushout(C.rows, C.take_cols(range(f.rows)), C.take_cols(range(f.rows, f.rows + g.rows)))
