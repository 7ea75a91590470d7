"""Command-line front end.

Commands that produce objects (`example`, `replace`, `realize`) print an
interchange document on stdout so they compose under pipes; analysis
commands print a text report, or one JSON document with `--machine`.
`validate` accepts several files and processes them concurrently with
`--jobs`, emitting one atomic report per file.  The default modulus for
`example` comes from TAMECHAIN_FIELD when set.
Exit codes: 0 success, 1 mathematical failure, 2 input failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from fractions import Fraction
from typing import Optional

from .errors import InputError, MathError, ParseError, TamechainError
from .posets import Edge, FinPoset, RealizedPoset, Vertex, point_name, realize, transfer_point
from .functors import minimal_cover, minimal_resolution
from .chains import (
    chain_projective_resolution,
    classify_morphism,
    cofibrant_replacement,
    homology_functor,
    minimal_projective_cover_ch,
    structure_decompose,
)
from .morphisms import end_ring, gluing_check, indecomposable
from .examples import ChainPair, GluingStage, builtin_example
from .interchange import (
    Document,
    build_document,
    chain_to_json,
    dumps_document,
    parse_document,
)

__all__ = ["main", "run"]


def _read_doc(args) -> Document:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.file!r}: {exc}") from exc
    return parse_document(text)


def _emit_report(args, report: dict) -> None:
    if args.machine:
        sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
        return
    for key, value in report.items():
        sys.stdout.write(f"{key}: {value}\n")


def _gens_json(poset: FinPoset, gens) -> list[dict]:
    return [{"element": poset.names[z], "multiplicity": d} for z, d in gens]


def _pick_object(doc: Document, name: Optional[str]):
    """Resolve --object against chain functors first, then functors."""
    if name is not None and name in doc.functors and name not in doc.chains:
        return doc.only_functor(name)
    if doc.chains or name in doc.chains:
        return doc.only_chain(name)
    return doc.only_functor(name)


def _validate_one(path: str) -> dict:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    doc = parse_document(text)
    checks = {"posets": len(doc.posets), "functors": len(doc.functors), "chain_functors": len(doc.chains)}
    for name, (X, _) in doc.chains.items():
        checks[f"checks[{name}]"] = sum(X.validate().values())
    return {"valid": True, **checks}


def cmd_validate(args) -> int:
    files = [args.file] + list(args.files)
    if len(files) == 1:
        _emit_report(args, _validate_one(files[0]))
        return 0
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(_validate_one, files))
    for path, report in zip(files, results):
        if args.machine:
            sys.stdout.write(
                json.dumps({"file": path, **report}, sort_keys=True, separators=(",", ":")) + "\n"
            )
        else:
            sys.stdout.write(f"{path}: valid ({report['chain_functors']} chain functors)\n")
    return 0


def cmd_info(args) -> int:
    doc = _read_doc(args)
    report: dict = {"field": doc.field}
    for name, P in doc.posets.items():
        report[f"poset[{name}].elements"] = len(P.names)
        report[f"poset[{name}].dimension"] = P.dimension().name
    for name, (F, _) in doc.functors.items():
        report[f"functor[{name}].dims"] = {F.poset.names[q]: F.dims[q] for q in range(F.poset.n)}
    for name, (X, _) in doc.chains.items():
        report[f"chain[{name}].top"] = X.top
        report[f"chain[{name}].dims"] = {X.poset.names[q]: list(X.dims[q]) for q in range(X.poset.n)}
        for n in range(X.top + 1):
            H = homology_functor(X, n)
            report[f"chain[{name}].H{n}"] = {X.poset.names[q]: H.dims[q] for q in range(X.poset.n)}
    if args.machine:
        _emit_report(args, report)
    else:
        for key, value in report.items():
            sys.stdout.write(f"{key}: {value}\n")
    return 0


def cmd_cover(args) -> int:
    doc = _read_doc(args)
    if args.object in doc.chains or (args.object is None and doc.chains):
        name, X = doc.only_chain(args.object)
        cov = minimal_projective_cover_ch(X)
        report = {
            "object": name,
            "kind": "chain",
            "layers": [
                {"degree": n, "generators": _gens_json(X.poset, gens)}
                for n, gens in enumerate(cov.layer_generators)
            ],
        }
    else:
        name, F = doc.only_functor(args.object)
        cov = minimal_cover(F)
        report = {
            "object": name,
            "kind": "functor",
            "generators": _gens_json(F.poset, cov.generators),
            "iso": all(m.rows == m.cols for m in cov.s.comps) and cov.s.is_iso(),
        }
    _emit_report(args, report)
    return 0


def cmd_resolve(args) -> int:
    doc = _read_doc(args)
    if args.object in doc.chains or (args.object is None and doc.chains):
        name, X = doc.only_chain(args.object)
        layers, pd = chain_projective_resolution(X)
        report = {
            "object": name,
            "kind": "chain",
            "projective_dimension": pd,
            "layers": [
                {
                    "step": i,
                    "cover_dims": {X.poset.names[q]: list(cov.P.trimmed().dims[q]) for q in range(X.poset.n)},
                }
                for i, cov in enumerate(layers)
            ],
        }
    else:
        name, F = doc.only_functor(args.object)
        res = minimal_resolution(F)
        report = {
            "object": name,
            "kind": "functor",
            "length": res.length,
            "p0_generators": _gens_json(F.poset, res.gens0),
            "p1_generators": _gens_json(F.poset, res.gens1),
            "d": {
                F.poset.names[q]: res.d.comps[q].tolist()
                for q in range(F.poset.n)
                if res.d.comps[q].rows and res.d.comps[q].cols
            },
        }
    _emit_report(args, report)
    return 0


def cmd_replace(args) -> int:
    doc = _read_doc(args)
    name, X = doc.only_chain(args.object)
    fact = cofibrant_replacement(X)
    pname = doc.chains[name][1]
    out = build_document(doc.field, {pname: doc.posets[pname]}, chains={"replacement": (fact.C, pname)})
    cls = classify_morphism(fact.pi)
    out["report"] = {
        "source": name,
        "weak_equivalence": cls.weak_equivalence,
        "fibration": cls.fibration,
    }
    sys.stdout.write(dumps_document(out))
    return 0


def cmd_decompose(args) -> int:
    doc = _read_doc(args)
    name, X = doc.only_chain(args.object)
    dec = structure_decompose(X)
    summands = []
    for label in dec.summands:
        entry = {
            "kind": label.kind,
            "degree": label.degree,
            "generators": _gens_json(X.poset, label.gens0),
        }
        if label.kind == "sphere" and label.gens1:
            entry["relation_generators"] = _gens_json(X.poset, label.gens1)
            entry["resolution_matrix"] = {
                X.poset.names[q]: label.complex.boundary_at(q, label.degree + 1).tolist()
                for q in range(X.poset.n)
                if label.complex.dim_at(q, label.degree + 1)
            }
        summands.append(entry)
    _emit_report(args, {"object": name, "summands": summands, "count": len(summands)})
    return 0


def cmd_endring(args) -> int:
    doc = _read_doc(args)
    name, obj = _pick_object(doc, args.object)
    ring = end_ring(obj)
    report = {"object": name, "dim": ring.dim}
    if args.machine:
        report["basis"] = [
            {
                ring.obj.poset.names[q]: [m.tolist() for m in row]
                for q, row in enumerate(b.comps)
            }
            for b in ring.basis
        ]
    _emit_report(args, report)
    return 0


def cmd_indec(args) -> int:
    doc = _read_doc(args)
    name, obj = _pick_object(doc, args.object)
    res = indecomposable(obj, strategy=args.strategy, budget=args.budget, seed=args.seed)
    verdict = "indecomposable" if res.indecomposable else "decomposable"
    certainty = "certain" if res.certain else "probable"
    _emit_report(
        args,
        {
            "object": name,
            "verdict": verdict,
            "certainty": certainty,
            "end_dim": res.end_dim,
            "trials": res.trials,
        },
    )
    return 0


def cmd_glue(args) -> int:
    doc = _read_doc(args)
    a_names = args.A.split(",") if args.A else None
    b_names = args.B.split(",") if args.B else None
    if (a_names is None or b_names is None) and doc.gluing:
        a_names = a_names or doc.gluing.get("A")
        b_names = b_names or doc.gluing.get("B")
    if not a_names or not b_names:
        raise ParseError("glue requires --A and --B (or a gluing block in the document)")
    name, obj = _pick_object(doc, args.object)
    rep = gluing_check(obj, a_names, b_names)
    _emit_report(
        args,
        {
            "object": name,
            "crit_hom_zero": rep.crit_hom_zero,
            "crit_rad_iso": rep.crit_rad_iso,
            "crit_kernel_nilpotent": rep.crit_kernel_nilpotent,
            "crit_restriction_injective": rep.crit_restriction_injective,
            "hom_coker_dim": rep.hom_coker_dim,
            "kan_nonzero_degrees": list(rep.kan_nonzero_degrees),
        },
    )
    return 0


def cmd_realize(args) -> int:
    doc = _read_doc(args)
    name, P = doc.only_poset(args.poset)
    if isinstance(P, RealizedPoset):
        raise ParseError("poset is already a realization")
    coords = []
    if args.V:
        for tok in args.V.split(","):
            num, den = tok.split("/")
            coords.append(Fraction(int(num), int(den)))
    subset = args.D.split(",") if args.D else None
    rp = realize(P, subset, coords)
    out = build_document(doc.field, {f"{name}_realized": rp})
    sys.stdout.write(dumps_document(out))
    return 0


def _parse_point(text: str):
    if text.startswith("vertex:"):
        return Vertex(text.split(":", 1)[1])
    if text.startswith("edge:"):
        x, y, frac = text.split(":", 1)[1].split(",")
        num, den = frac.split("/")
        return Edge(x, y, Fraction(int(num), int(den)))
    raise ParseError(f"bad point {text!r}; use vertex:q or edge:x,y,num/den")


def cmd_transfer(args) -> int:
    doc = _read_doc(args)
    name, P = doc.only_poset(args.poset)
    if isinstance(P, RealizedPoset):
        point = _parse_point(args.point)
        result = P.transfer(point)
        _emit_report(args, {"poset": name, "point": args.point, "transfer": "bottom" if result is None else point_name(result)})
        return 0
    if not args.sub:
        raise ParseError("transfer on a plain poset needs --sub")
    sub = [P.index(n) for n in args.sub.split(",")]
    z = P.index(args.point)
    result = transfer_point(P, sub, z)
    _emit_report(args, {"poset": name, "point": args.point, "transfer": "bottom" if result is None else P.names[result]})
    return 0


def cmd_example(args) -> int:
    obj = builtin_example(args.name, args.field)
    point_name_default = "P"
    if isinstance(obj, GluingStage):
        out = build_document(
            args.field,
            {point_name_default: obj.functor.poset},
            chains={"X": (obj.functor, point_name_default)},
            gluing={"A": list(obj.a_names), "B": list(obj.b_names)},
        )
    elif isinstance(obj, ChainPair):
        out = build_document(
            args.field,
            {point_name_default: obj.left.poset},
            chains={"left": (obj.left, point_name_default), "right": (obj.right, point_name_default)},
        )
    else:
        out = build_document(args.field, {point_name_default: obj.poset}, chains={args.name: (obj, point_name_default)})
    sys.stdout.write(dumps_document(out))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tamechain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.set_defaults(fn=fn)
        sp.add_argument("file", nargs="?", default="-", help="interchange document (default: stdin)")
        sp.add_argument("--machine", action="store_true", help="emit a JSON report")
        return sp

    sp = add("validate", cmd_validate, help="check structural invariants")
    sp.add_argument("files", nargs="*", help="additional documents for batch mode")
    sp.add_argument("--jobs", type=int, default=1, help="parallel workers in batch mode")
    add("info", cmd_info, help="dimensions, poset class, homology table")
    sp = add("cover", cmd_cover, help="minimal projective cover generators")
    sp.add_argument("--object", default=None)
    sp = add("resolve", cmd_resolve, help="minimal projective resolution")
    sp.add_argument("--object", default=None)
    sp = add("replace", cmd_replace, help="minimal cofibrant replacement (emits a document)")
    sp.add_argument("--object", default=None)
    sp = add("decompose", cmd_decompose, help="sphere/disk summand labels")
    sp.add_argument("--object", default=None)
    sp = add("endring", cmd_endring, help="endomorphism ring dimension and basis")
    sp.add_argument("--object", default=None)
    sp = add("indec", cmd_indec, help="indecomposability certificate")
    sp.add_argument("--object", default=None)
    sp.add_argument("--strategy", choices=["exhaustive", "fitting"], default="exhaustive")
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp = add("glue", cmd_glue, help="gluing criteria for D = A u B")
    sp.add_argument("--object", default=None)
    sp.add_argument("--A", default=None, help="comma-separated element names")
    sp.add_argument("--B", default=None, help="comma-separated element names")
    sp = add("realize", cmd_realize, help="realize a poset (emits a document)")
    sp.add_argument("--poset", default=None)
    sp.add_argument("--V", default="", help="comma-separated coordinates, e.g. -1/2,-3/4")
    sp.add_argument("--D", default=None, help="comma-separated closed subset (default: all)")
    sp = add("transfer", cmd_transfer, help="transfer of a point into a subposet")
    sp.add_argument("--poset", default=None)
    sp.add_argument("--point", required=True)
    sp.add_argument("--sub", default=None, help="subposet element names (plain posets)")

    sp = sub.add_parser("example", help="emit a builtin object as a document")
    sp.set_defaults(fn=cmd_example)
    sp.add_argument("name")
    sp.add_argument("--field", type=int, default=int(os.environ.get("TAMECHAIN_FIELD", "2")))
    sp.add_argument("--machine", action="store_true")
    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        sys.stderr.write(f"input error ({type(exc).__name__}): {exc}\n")
        return 2
    except MathError as exc:
        sys.stderr.write(f"mathematical error ({type(exc).__name__}): {exc}\n")
        return 1
    except TamechainError as exc:
        sys.stderr.write(f"error ({type(exc).__name__}): {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
