"""Vector-space valued functors on finite posets.

A functor assigns a dimension to every element and a matrix to every
cover relation; composites along longer paths are derived (and checked
for path independence, which is only a real constraint on posets of
dimension 2 or more).  On top of that sit colimits over subposets, left
Kan extension (colimit route and transfer route), local homology at an
element, radicals, minimal projective covers, and length-<=1 minimal
resolutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import KernelNotProjectiveError, ValidationError
from .field import Mat, kernel, cokernel, rref, solve, inverse
from .posets import FinPoset, transfer_point

__all__ = [
    "VectFunctor",
    "NatMap",
    "FreePresentation",
    "Resolution",
    "Colimit",
    "LocalHomology",
    "free_functor",
    "free_on_generators",
    "assemble_free_map",
    "direct_sum_functors",
    "colim_over",
    "kan_extend",
    "local_homology",
    "radical",
    "minimal_cover",
    "is_projective",
    "minimal_resolution",
    "ker_functor",
    "coker_functor",
    "lift_through",
    "common_discretization",
    "column_space_basis",
]


class VectFunctor:
    """Functor poset -> vect_{F_p}: dims per element, matrix per cover."""

    def __init__(self, poset: FinPoset, dims: Sequence[int], maps: dict[tuple[int, int], Mat], p: int):
        self.poset = poset
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != poset.n or any(d < 0 for d in self.dims):
            raise ValidationError("functor dims must list one non-negative value per element")
        self.p = p
        full: dict[tuple[int, int], Mat] = {}
        for y, x in poset.covers:
            m = maps.get((y, x))
            if m is None:
                m = Mat.zeros(self.dims[x], self.dims[y], p)
            if m.p != p:
                raise ValidationError(f"cover map for {(y, x)} uses modulus {m.p}, expected {p}")
            if m.shape != (self.dims[x], self.dims[y]):
                raise ValidationError(
                    f"cover map for ({poset.names[y]}, {poset.names[x]}) has shape {m.shape}, "
                    f"expected {(self.dims[x], self.dims[y])}"
                )
            full[(y, x)] = m
        for key in maps:
            if key not in full:
                raise ValidationError(f"map given for non-cover pair {key}")
        self.maps = full
        self._leq_maps = self._compose_all()

    def _compose_all(self) -> dict[tuple[int, int], Mat]:
        """All composite maps, checking path independence."""
        out: dict[tuple[int, int], Mat] = {}
        for e in range(self.poset.n):
            out[(e, e)] = Mat.identity(self.dims[e], self.p)
        for x in self.poset.linear_extension():
            for y in self.poset.covered_by(x):
                step = self.maps[(y, x)]
                for (src, mid), m in list(out.items()):
                    if mid != y:
                        continue
                    comp = step @ m
                    prev = out.get((src, x))
                    if prev is None:
                        out[(src, x)] = comp
                    elif prev != comp:
                        raise ValidationError(
                            f"functoriality fails between {self.poset.names[src]} and {self.poset.names[x]}"
                        )
        return out

    def at(self, x: int) -> int:
        return self.dims[x]

    def map_leq(self, y: int, x: int) -> Mat:
        if not self.poset.leq(y, x):
            raise ValueError(f"{self.poset.names[y]} is not below {self.poset.names[x]}")
        return self._leq_maps[(y, x)]

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def total_dim(self) -> int:
        return sum(self.dims)

    def restrict(self, subset: Sequence[int]) -> "VectFunctor":
        """Restriction to a full subposet (composite maps become covers)."""
        subset = sorted(set(subset))
        sub = self.poset.restrict(subset)
        maps = {
            (a, b): self.map_leq(subset[a], subset[b])
            for a, b in sub.covers
        }
        return VectFunctor(sub, [self.dims[e] for e in subset], maps, self.p)

    def __repr__(self) -> str:
        return f"VectFunctor(dims={self.dims}, p={self.p})"


@dataclass(frozen=True)
class NatMap:
    """Natural transformation between functors on the same poset."""

    dom: VectFunctor
    cod: VectFunctor
    comps: tuple[Mat, ...]

    def __post_init__(self):
        if self.dom.poset is not self.cod.poset and self.dom.poset.names != self.cod.poset.names:
            raise ValidationError("natural map requires a common poset")
        if len(self.comps) != self.dom.poset.n:
            raise ValidationError("one component per element required")
        for x, m in enumerate(self.comps):
            if m.shape != (self.cod.dims[x], self.dom.dims[x]):
                raise ValidationError(f"component at {self.dom.poset.names[x]} has shape {m.shape}")
        for y, x in self.dom.poset.covers:
            if self.cod.maps[(y, x)] @ self.comps[y] != self.comps[x] @ self.dom.maps[(y, x)]:
                raise ValidationError(
                    f"naturality fails on cover ({self.dom.poset.names[y]}, {self.dom.poset.names[x]})"
                )

    def __matmul__(self, other: "NatMap") -> "NatMap":
        return NatMap(other.dom, self.cod, tuple(a @ b for a, b in zip(self.comps, other.comps)))

    @staticmethod
    def identity(F: VectFunctor) -> "NatMap":
        return NatMap(F, F, tuple(Mat.identity(d, F.p) for d in F.dims))

    @staticmethod
    def zero(F: VectFunctor, G: VectFunctor) -> "NatMap":
        return NatMap(F, G, tuple(Mat.zeros(G.dims[x], F.dims[x], F.p) for x in range(F.poset.n)))

    def is_epi(self) -> bool:
        return all(m.rank() == m.rows for m in self.comps)

    def is_mono(self) -> bool:
        return all(m.rank() == m.cols for m in self.comps)

    def is_iso(self) -> bool:
        return all(m.rows == m.cols and m.rank() == m.rows for m in self.comps)


# --- free functors ----------------------------------------------------------


def free_functor(poset: FinPoset, z: int, d: int, p: int) -> VectFunctor:
    """Homogeneous free functor: value F^d on the up-set of z, identities inside."""
    return free_on_generators(poset, ((z, d),), p)


def _gen_blocks(poset: FinPoset, gens: Sequence[tuple[int, int]], q: int) -> list[tuple[int, int, int]]:
    """(generator index, start, stop) coordinate blocks present at q."""
    blocks = []
    at = 0
    for i, (z, d) in enumerate(gens):
        if poset.leq(z, q) and d:
            blocks.append((i, at, at + d))
            at += d
    return blocks


def _normalize_gens(gens: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    merged: dict[int, int] = {}
    for z, d in gens:
        if d < 0:
            raise ValueError("generator multiplicity must be non-negative")
        merged[z] = merged.get(z, 0) + d
    return tuple((z, d) for z, d in sorted(merged.items()) if d > 0)


def free_on_generators(poset: FinPoset, gens: Iterable[tuple[int, int]], p: int) -> VectFunctor:
    gens = _normalize_gens(gens)
    dims = [sum(d for z, d in gens if poset.leq(z, q)) for q in range(poset.n)]
    maps = {}
    for y, x in poset.covers:
        m = Mat.zeros(dims[x], dims[y], p).arr.copy()
        ybl = {i: (a, b) for i, a, b in _gen_blocks(poset, gens, y)}
        xbl = {i: (a, b) for i, a, b in _gen_blocks(poset, gens, x)}
        for i, (ya, yb) in ybl.items():
            xa, xb = xbl[i]
            for k in range(yb - ya):
                m[xa + k, ya + k] = 1
        maps[(y, x)] = Mat(m, p)
    F = VectFunctor(poset, dims, maps, p)
    F.generators = gens
    return F


def assemble_free_map(free: VectFunctor, cod: VectFunctor, values: Sequence[Mat]) -> NatMap:
    """Map out of a free functor determined by one matrix per generator,
    each of shape cod(z) x multiplicity."""
    gens = free.generators
    poset = free.poset
    comps = []
    for q in range(poset.n):
        cols = []
        for i, a, b in _gen_blocks(poset, gens, q):
            z, d = gens[i]
            cols.append(cod.map_leq(z, q) @ values[i])
        comps.append(Mat.hstack(cols) if cols else Mat.zeros(cod.dims[q], 0, free.p))
    return NatMap(free, cod, tuple(comps))


def direct_sum_functors(functors: Sequence[VectFunctor]) -> tuple[VectFunctor, list[NatMap], list[NatMap]]:
    """Direct sum with inclusion and projection witnesses."""
    poset = functors[0].poset
    p = functors[0].p
    dims = [sum(F.dims[q] for F in functors) for q in range(poset.n)]
    maps = {
        (y, x): Mat.block_diag([F.maps[(y, x)] for F in functors], p)
        for y, x in poset.covers
    }
    total = VectFunctor(poset, dims, maps, p)
    incls, projs = [], []
    at = [0] * poset.n
    for F in functors:
        inc, prj = [], []
        for q in range(poset.n):
            i = Mat.zeros(dims[q], F.dims[q], p).arr.copy()
            j = Mat.zeros(F.dims[q], dims[q], p).arr.copy()
            for k in range(F.dims[q]):
                i[at[q] + k, k] = 1
                j[k, at[q] + k] = 1
            inc.append(Mat(i, p))
            prj.append(Mat(j, p))
            at[q] += F.dims[q]
        incls.append(NatMap(F, total, tuple(inc)))
        projs.append(NatMap(total, F, tuple(prj)))
    return total, incls, projs


# --- colimits and Kan extension ---------------------------------------------


@dataclass(frozen=True)
class Colimit:
    """Colimit of a functor over a subposet, presented as a cokernel."""

    dim: int
    elements: tuple[int, ...]
    cocone: dict[int, Mat]
    proj: Mat
    section: Mat
    blocks: dict[int, tuple[int, int]]


def colim_over(F: VectFunctor, subset: Iterable[int]) -> Colimit:
    """coker of the difference map over the induced covers of the subset."""
    elements = tuple(sorted(set(subset)))
    p = F.p
    blocks = {}
    at = 0
    for s in elements:
        blocks[s] = (at, at + F.dims[s])
        at += F.dims[s]
    total = at
    sub = F.poset.restrict(elements) if elements else None
    cols = []
    if sub is not None:
        for a, b in sub.covers:
            y, x = elements[a], elements[b]
            col = Mat.zeros(total, F.dims[y], p).arr.copy()
            m = F.map_leq(y, x)
            col[blocks[x][0] : blocks[x][1], :] = m.arr
            col[blocks[y][0] : blocks[y][1], :] -= Mat.identity(F.dims[y], p).arr
            cols.append(Mat(col, p))
    delta = Mat.hstack(cols) if cols else Mat.zeros(total, 0, p)
    proj, section = cokernel(delta)
    cocone = {s: proj.take_cols(range(*blocks[s])) for s in elements}
    return Colimit(proj.rows, elements, cocone, proj, section, blocks)


@dataclass(frozen=True)
class KanExtension:
    functor: VectFunctor
    unit: tuple[Mat, ...]  # F(d) -> ext(embed[d]), an iso for full inclusions
    method: str
    cocones: Optional[dict[int, Colimit]] = None


def _check_embedding(F: VectFunctor, ambient: FinPoset, embed: Sequence[int]) -> tuple[int, ...]:
    embed = tuple(int(e) for e in embed)
    if len(embed) != F.poset.n or len(set(embed)) != len(embed):
        raise ValueError("embedding must inject the functor poset into the ambient poset")
    for a in range(F.poset.n):
        for b in range(F.poset.n):
            if F.poset.leq(a, b) != ambient.leq(embed[a], embed[b]):
                raise ValueError("embedding is not a full order embedding")
    return embed


def kan_extend(F: VectFunctor, ambient: FinPoset, embed: Sequence[int], method: str = "auto") -> KanExtension:
    """Left Kan extension along a full subposet inclusion.

    method "colim" computes every value as a colimit over the down-set;
    "transfer" precomposes with the transfer (valid when the image is
    closed and the ambient poset has dimension <= 1); "auto" prefers the
    transfer route when it is available.
    """
    embed = _check_embedding(F, ambient, embed)
    image = set(embed)
    if method == "auto":
        ok = ambient.dimension().at_most_one() and ambient.is_closed(image)
        method = "transfer" if ok else "colim"
    if method == "transfer":
        pos = {e: i for i, e in enumerate(embed)}
        t = []
        for x in range(ambient.n):
            w = transfer_point(ambient, sorted(image), x)
            t.append(None if w is None else pos[w])
        dims = [0 if t[x] is None else F.dims[t[x]] for x in range(ambient.n)]
        maps = {}
        for y, x in ambient.covers:
            if t[y] is None or t[x] is None:
                maps[(y, x)] = Mat.zeros(dims[x], dims[y], F.p)
            else:
                maps[(y, x)] = F.map_leq(t[y], t[x])
        ext = VectFunctor(ambient, dims, maps, F.p)
        unit = tuple(Mat.identity(F.dims[d], F.p) for d in range(F.poset.n))
        return KanExtension(ext, unit, "transfer")
    if method != "colim":
        raise ValueError(f"unknown Kan extension method {method!r}")
    pos = {e: i for i, e in enumerate(embed)}
    downs = {x: tuple(sorted(pos[e] for e in image if ambient.leq(e, x))) for x in range(ambient.n)}
    colims = {x: colim_over(F, downs[x]) for x in range(ambient.n)}
    dims = [colims[x].dim for x in range(ambient.n)]
    maps = {}
    for y, x in ambient.covers:
        cy, cx = colims[y], colims[x]
        tot_y = sum(F.dims[s] for s in cy.elements)
        incl = Mat.zeros(sum(F.dims[s] for s in cx.elements), tot_y, F.p).arr.copy()
        for s in cy.elements:
            ya, yb = cy.blocks[s]
            xa, xb = cx.blocks[s]
            incl[xa:xb, ya:yb] = Mat.identity(F.dims[s], F.p).arr
        maps[(y, x)] = cx.proj @ Mat(incl, F.p) @ cy.section
    ext = VectFunctor(ambient, dims, maps, F.p)
    unit = tuple(colims[embed[d]].cocone[d] for d in range(F.poset.n))
    return KanExtension(ext, unit, "colim", colims)


# --- local homology, radical, covers ----------------------------------------


@dataclass(frozen=True)
class LocalHomology:
    """H0/H1 at an element: cokernel and kernel of the assembled map from
    the values at its covered elements."""

    h0_dim: int
    h0_proj: Mat
    h0_section: Mat
    h1_dim: int
    h1_incl: Mat


def local_homology(F: VectFunctor, x: int) -> LocalHomology:
    ys = F.poset.covered_by(x)
    if ys:
        A = Mat.hstack([F.maps[(y, x)] for y in ys])
    else:
        A = Mat.zeros(F.dims[x], 0, F.p)
    proj, section = cokernel(A)
    K = kernel(A)
    return LocalHomology(proj.rows, proj, section, K.cols, K)


def column_space_basis(M: Mat) -> Mat:
    """Canonical (echelon) basis of the column space, as columns."""
    rr = rref(M.transpose())
    return rr.R.take_rows(range(rr.rank)).transpose()


def radical(F: VectFunctor) -> tuple[VectFunctor, NatMap]:
    """Subfunctor of images of all maps from strictly smaller elements."""
    bases = []
    for x in range(F.poset.n):
        ys = F.poset.covered_by(x)
        if ys:
            bases.append(column_space_basis(Mat.hstack([F.maps[(y, x)] for y in ys])))
        else:
            bases.append(Mat.zeros(F.dims[x], 0, F.p))
    return _subfunctor_from_bases(F, bases)


def _subfunctor_from_bases(F: VectFunctor, bases: list[Mat]) -> tuple[VectFunctor, NatMap]:
    dims = [b.cols for b in bases]
    maps = {}
    for y, x in F.poset.covers:
        maps[(y, x)] = solve(bases[x], F.maps[(y, x)] @ bases[y])
    sub = VectFunctor(F.poset, dims, maps, F.p)
    return sub, NatMap(sub, F, tuple(bases))


def ker_functor(nat: NatMap) -> tuple[VectFunctor, NatMap]:
    return _subfunctor_from_bases(nat.dom, [kernel(m) for m in nat.comps])


def coker_functor(nat: NatMap) -> tuple[VectFunctor, NatMap]:
    F, G = nat.dom, nat.cod
    projs, sections = [], []
    for m in nat.comps:
        c, s = cokernel(m)
        projs.append(c)
        sections.append(s)
    dims = [c.rows for c in projs]
    maps = {
        (y, x): projs[x] @ G.maps[(y, x)] @ sections[y]
        for y, x in F.poset.covers
    }
    Q = VectFunctor(F.poset, dims, maps, F.p)
    return Q, NatMap(G, Q, tuple(projs))


@dataclass(frozen=True)
class FreePresentation:
    """Generators (element, multiplicity) with an objectwise-invertible
    witness from the corresponding free functor."""

    generators: tuple[tuple[int, int], ...]
    witness: NatMap


@dataclass(frozen=True)
class Cover:
    P: VectFunctor
    generators: tuple[tuple[int, int], ...]
    s: NatMap


def minimal_cover(F: VectFunctor) -> Cover:
    """Minimal projective cover: one generator block per element, of size
    dim H0 there, mapped in through a canonical section of the quotient."""
    locals_ = [local_homology(F, x) for x in range(F.poset.n)]
    gens = _normalize_gens((x, locals_[x].h0_dim) for x in range(F.poset.n))
    P = free_on_generators(F.poset, gens, F.p)
    values = [solve(locals_[z].h0_proj, Mat.identity(d, F.p)) for z, d in gens]
    s = assemble_free_map(P, F, values)
    return Cover(P, gens, s)


def is_projective(F: VectFunctor) -> Optional[FreePresentation]:
    """FreePresentation when F is projective (minimal cover an iso), else None."""
    if F.poset.dimension().at_most_one():
        if any(local_homology(F, x).h1_dim for x in range(F.poset.n)):
            return None
        cov = minimal_cover(F)
        return FreePresentation(cov.generators, cov.s)
    cov = minimal_cover(F)
    if any(kernel(m).cols for m in cov.s.comps):
        return None
    return FreePresentation(cov.generators, cov.s)


@dataclass(frozen=True)
class Resolution:
    """Minimal projective resolution of length <= 1: 0 -> P1 -d-> P0 -aug-> F."""

    p1: VectFunctor
    p0: VectFunctor
    d: NatMap
    aug: NatMap
    gens0: tuple[tuple[int, int], ...]
    gens1: tuple[tuple[int, int], ...]

    @property
    def length(self) -> int:
        return 0 if self.p1.is_zero() else 1


def minimal_resolution(F: VectFunctor) -> Resolution:
    cov = minimal_cover(F)
    K, incl = ker_functor(cov.s)
    pres = is_projective(K)
    if pres is None:
        raise KernelNotProjectiveError(
            "kernel of the minimal cover is not projective; the indexing poset is not of dimension <= 1"
        )
    d = incl @ pres.witness
    return Resolution(pres.witness.dom, cov.P, d, cov.s, cov.generators, pres.generators)


def lift_through(f: NatMap, e: NatMap, pres: Optional[FreePresentation] = None) -> NatMap:
    """g with e g = f, for projective domain of f and im f inside im e.

    The lift is chosen canonically on the generators of a free presentation
    of the domain.
    """
    if pres is None:
        pres = is_projective(f.dom)
        if pres is None:
            raise ValueError("lift requires a projective domain")
    w = pres.witness
    free = w.dom
    gens = free.generators
    winv = [inverse(m) for m in w.comps]
    values = []
    for i, (z, d) in enumerate(gens):
        blk = next((a, b) for j, a, b in _gen_blocks(free.poset, gens, z) if j == i)
        target = f.comps[z] @ w.comps[z].take_cols(range(*blk))
        values.append(solve(e.comps[z], target))
    g0 = assemble_free_map(free, e.dom, values)
    comps = tuple(g0.comps[x] @ winv[x] for x in range(free.poset.n))
    return NatMap(f.dom, e.dom, comps)


def common_discretization(
    ambient: FinPoset, items: Sequence[tuple[VectFunctor, Sequence[int]]]
) -> tuple[tuple[int, ...], FinPoset, list[VectFunctor]]:
    """Closure of the union of the supports, with every functor re-expressed
    on it by Kan extension along its own inclusion."""
    support: set[int] = set()
    for F, embed in items:
        support.update(int(e) for e in embed)
    closed = ambient.closure(support)
    sub = ambient.restrict(closed)
    pos = {e: i for i, e in enumerate(closed)}
    out = []
    for F, embed in items:
        ext = kan_extend(F, sub, [pos[int(e)] for e in embed])
        out.append(ext.functor)
    return tuple(closed), sub, out


def common_realized_discretization(base: FinPoset, items: Sequence[VectFunctor]):
    """Common discretization of functors living on realizations of closed
    subsets of one base poset: realize the closure of the union of the
    subsets with the union of the coordinate sets, then Kan-extend each
    functor along the point-name embedding."""
    from .posets import RealizedPoset, realize as _realize

    subsets: set[int] = set()
    coords = set()
    for F in items:
        rp = F.poset
        if not isinstance(rp, RealizedPoset):
            raise ValueError("functors must be carried by realized posets")
        if rp.base.names != base.names:
            raise ValueError("all realizations must share the base poset")
        subsets.update(rp.d_subset)
        coords.update(rp.vset)
    union = _realize(base, [base.names[e] for e in base.closure(subsets)], sorted(coords))
    out = []
    for F in items:
        embed = [union.index(name) for name in F.poset.names]
        out.append(kan_extend(F, union, embed).functor)
    return union, out
