"""Interchange documents: UTF-8 JSON with top-level keys `field`, `posets`,
`functors`, `chain_functors` (plus optional metadata such as `gluing`).

Matrices are arrays of rows of integers reduced mod p; a zero or empty
matrix may be written as null since its shape is determined by the
declared dims.  Rational coordinates are "num/den" strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .errors import FieldMismatchError, ParseError
from .field import Mat
from .posets import Edge, FinPoset, RealizedPoset, realize
from .functors import VectFunctor
from .chains import ChainFunctor

__all__ = ["Document", "parse_document", "dumps_document", "build_document"]


def _mat_to_json(m: Mat):
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return None
    return m.tolist()


def _mat_from_json(val, rows: int, cols: int, p: int) -> Mat:
    if val is None:
        return Mat.zeros(rows, cols, p)
    try:
        m = Mat(val, p)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix literal: {exc}") from exc
    if m.shape != (rows, cols):
        raise ParseError(f"matrix has shape {m.shape}, expected {(rows, cols)}")
    return m


def _fraction_to_json(t: Fraction) -> str:
    return f"{t.numerator}/{t.denominator}"


def _fraction_from_json(s) -> Fraction:
    try:
        if isinstance(s, str):
            num, den = s.split("/")
            return Fraction(int(num), int(den))
        raise ValueError("expected a \"num/den\" string")
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {s!r}: {exc}") from exc


def poset_to_json(P: FinPoset) -> dict:
    out = {
        "elements": list(P.names),
        "covers": [[P.names[y], P.names[x]] for y, x in P.covers],
    }
    if isinstance(P, RealizedPoset):
        base = P.base
        out["realization"] = {
            "base_elements": list(base.names),
            "base_covers": [[base.names[y], base.names[x]] for y, x in base.covers],
            "subset": [base.names[q] for q in P.d_subset],
            "coordinates": [_fraction_to_json(v) for v in P.vset],
            "edges": [
                [z.top, z.bottom, _fraction_to_json(z.t)]
                for z in P.points
                if isinstance(z, Edge)
            ],
        }
    return out


def poset_from_json(block: dict) -> FinPoset:
    if not isinstance(block, dict) or "elements" not in block or "covers" not in block:
        raise ParseError("poset block needs `elements` and `covers`")
    real = block.get("realization")
    if real is not None:
        base = FinPoset.from_covers(real["base_elements"], [tuple(c) for c in real["base_covers"]])
        rp = realize(
            base,
            real.get("subset"),
            [_fraction_from_json(s) for s in real.get("coordinates", [])],
        )
        if list(rp.names) != list(block["elements"]):
            raise ParseError("realization block does not reproduce the listed elements")
        return rp
    try:
        return FinPoset.from_covers(block["elements"], [tuple(c) for c in block["covers"]])
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def functor_to_json(F: VectFunctor, poset_name: str) -> dict:
    names = F.poset.names
    return {
        "poset": poset_name,
        "dims": {names[q]: F.dims[q] for q in range(F.poset.n)},
        "maps": {
            f"{names[y]}->{names[x]}": _mat_to_json(F.maps[(y, x)])
            for y, x in F.poset.covers
        },
    }


def _cover_from_key(P: FinPoset, key: str) -> tuple[int, int]:
    if "->" not in key:
        raise ParseError(f"bad cover key {key!r}")
    y, x = key.split("->", 1)
    try:
        pair = (P.index(y), P.index(x))
    except KeyError as exc:
        raise ParseError(f"cover key {key!r} mentions unknown element") from exc
    if pair not in set(P.covers):
        raise ParseError(f"{key!r} is not a cover relation")
    return pair


def functor_from_json(block: dict, P: FinPoset, p: int) -> VectFunctor:
    dims = [int(block["dims"].get(name, 0)) for name in P.names]
    maps = {}
    for key, val in (block.get("maps") or {}).items():
        y, x = _cover_from_key(P, key)
        maps[(y, x)] = _mat_from_json(val, dims[x], dims[y], p)
    return VectFunctor(P, dims, maps, p)


def chain_to_json(X: ChainFunctor, poset_name: str) -> dict:
    names = X.poset.names
    return {
        "poset": poset_name,
        "top": X.top,
        "dims": {names[q]: list(X.dims[q]) for q in range(X.poset.n)},
        "boundaries": {
            names[q]: [_mat_to_json(X.boundaries[q][k]) for k in range(X.top)]
            for q in range(X.poset.n)
        },
        "maps": {
            f"{names[y]}->{names[x]}": [_mat_to_json(m) for m in X.maps[(y, x)]]
            for y, x in X.poset.covers
        },
    }


def chain_from_json(block: dict, P: FinPoset, p: int) -> ChainFunctor:
    top = int(block.get("top", 0))
    dims = []
    for name in P.names:
        row = [int(d) for d in block["dims"].get(name, [0] * (top + 1))]
        if len(row) != top + 1:
            raise ParseError(f"dims at {name!r} must list degrees 0..{top}")
        dims.append(row)
    bdy = []
    for q, name in enumerate(P.names):
        given = (block.get("boundaries") or {}).get(name, [None] * top)
        if len(given) != top:
            raise ParseError(f"boundaries at {name!r} must list degrees 1..{top}")
        bdy.append(
            [_mat_from_json(given[k], dims[q][k], dims[q][k + 1], p) for k in range(top)]
        )
    maps = {}
    for key, val in (block.get("maps") or {}).items():
        y, x = _cover_from_key(P, key)
        if len(val) != top + 1:
            raise ParseError(f"cover maps for {key!r} must list degrees 0..{top}")
        maps[(y, x)] = [
            _mat_from_json(val[n], dims[x][n], dims[y][n], p) for n in range(top + 1)
        ]
    return ChainFunctor(P, dims, bdy, maps, p)


@dataclass
class Document:
    field: int
    posets: dict[str, FinPoset] = dc_field(default_factory=dict)
    functors: dict[str, tuple[VectFunctor, str]] = dc_field(default_factory=dict)
    chains: dict[str, tuple[ChainFunctor, str]] = dc_field(default_factory=dict)
    gluing: Optional[dict] = None

    def only_functor(self, name: Optional[str]) -> tuple[str, VectFunctor]:
        return _pick("functor", self.functors, name)

    def only_chain(self, name: Optional[str]) -> tuple[str, ChainFunctor]:
        return _pick("chain functor", self.chains, name)

    def only_poset(self, name: Optional[str]) -> tuple[str, FinPoset]:
        if name is not None:
            if name not in self.posets:
                raise ParseError(f"no poset named {name!r} in the document")
            return name, self.posets[name]
        if len(self.posets) != 1:
            raise ParseError("document holds several posets; use --poset")
        ((n, P),) = self.posets.items()
        return n, P


def _pick(kind: str, table: dict, name: Optional[str]):
    if name is not None:
        if name not in table:
            raise ParseError(f"no {kind} named {name!r} in the document")
        return name, table[name][0]
    if len(table) != 1:
        raise ParseError(f"document holds {len(table)} {kind}s; pass a name")
    ((n, (obj, _)),) = table.items()
    return n, obj


def parse_document(text: str, expect_field: Optional[int] = None) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "field" not in raw:
        raise ParseError("document must be an object with a `field` key")
    p = int(raw["field"])
    if expect_field is not None and expect_field != p:
        raise FieldMismatchError(f"document field {p} does not match requested {expect_field}")
    doc = Document(field=p)
    for name, block in (raw.get("posets") or {}).items():
        doc.posets[name] = poset_from_json(block)
    for name, block in (raw.get("functors") or {}).items():
        pname = block.get("poset")
        if pname not in doc.posets:
            raise ParseError(f"functor {name!r} references unknown poset {pname!r}")
        doc.functors[name] = (functor_from_json(block, doc.posets[pname], p), pname)
    for name, block in (raw.get("chain_functors") or {}).items():
        pname = block.get("poset")
        if pname not in doc.posets:
            raise ParseError(f"chain functor {name!r} references unknown poset {pname!r}")
        doc.chains[name] = (chain_from_json(block, doc.posets[pname], p), pname)
    doc.gluing = raw.get("gluing")
    return doc


def build_document(
    p: int,
    posets: dict[str, FinPoset],
    functors: Optional[dict[str, tuple[VectFunctor, str]]] = None,
    chains: Optional[dict[str, tuple[ChainFunctor, str]]] = None,
    gluing: Optional[dict] = None,
) -> dict:
    out: dict = {"field": p, "posets": {n: poset_to_json(P) for n, P in posets.items()}}
    if functors:
        out["functors"] = {n: functor_to_json(F, pn) for n, (F, pn) in functors.items()}
    if chains:
        out["chain_functors"] = {n: chain_to_json(X, pn) for n, (X, pn) in chains.items()}
    if gluing:
        out["gluing"] = gluing
    return out


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
