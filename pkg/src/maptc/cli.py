"""Command-line entry point: ``maptc {rank,freehom,cuplength,bounds,planner}``.

Exit codes: 0 success, 1 validation or report failure, 2 parse error,
3 contradiction, 4 unsupported input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import TextIO

from . import __version__
from .bounds import Contradiction, load_facts
from .catalog import UnsupportedSpace
from .free_group import FreeHom, cat_free_hom, fold, tc_free_hom
from .graded import (
    AlgebraMap,
    GradedAlgebra,
    InvalidAlgebra,
    cat_map_lower_bound,
    tc_map_lower_bound,
    zero_divisor_cuplength,
)
from .linalg import IntMatrix, smith_normal_form
from .planners import BUILTIN, builtin_planner, sample_run, validate_planner, write_paths_csv

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_CONTRADICTION, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4


class ParseError(Exception):
    pass


class Unsupported(Exception):
    pass


def _read_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ParseError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_rank(args, out: TextIO) -> int:
    obj = _read_json(args.file)
    m = IntMatrix.from_rows(obj) if isinstance(obj, list) else IntMatrix.from_json(obj)
    d, _, _ = smith_normal_form(m)
    invariants = [x for x in d.diagonal() if x]
    r = len(invariants)
    why = [
        "cat(f) = rank(f) for a homomorphism of free abelian groups Z^n -> Z^m",
        "TC(f) = cat(f) because the domain is abelian (its classifying space is an H-space)",
    ]
    if args.json:
        _dump({"rank": r, "cat": r, "TC": r, "invariant_factors": [str(x) for x in invariants], "justification": why}, out)
    else:
        out.write(f"rank {r}; cat(f)=TC(f)={r}\n")
        out.write(f"  Smith invariants: {' '.join(map(str, invariants)) or '(none)'}\n")
        for line in why:
            out.write(f"  {line}\n")
    return EXIT_OK


def cmd_freehom(args, out: TextIO) -> int:
    f = FreeHom.from_json(_read_json(args.file))
    g = fold(f)
    rank, cat, tc = g.rank, cat_free_hom(f), tc_free_hom(f)
    if args.json:
        _dump(
            {
                "image_rank": rank,
                "cat": cat,
                "TC": tc,
                "folded_graph": {"vertices": g.num_vertices, "base": g.base, "edges": [list(e) for e in g.edges]},
            },
            out,
        )
    else:
        out.write(f"image rank {rank}; cat={cat}; TC={tc}\n")
        out.write(f"  folded core graph: {g.num_vertices} vertices, {len(g.edges)} edges\n")
    return EXIT_OK


def cmd_cuplength(args, out: TextIO) -> int:
    alg_path = Path(args.algebra)
    algebra = GradedAlgebra.from_json(_read_json(alg_path))
    if args.map is None:
        k = zero_divisor_cuplength(algebra)
        if args.json:
            _dump({"zero_divisor_cuplength": k, "field": algebra.field.name}, out)
        else:
            out.write(f"zero-divisor cup-length {k} over {algebra.field.name}; TC(X) >= {k}\n")
        return EXIT_OK

    map_path = Path(args.map)
    mobj = _read_json(map_path)

    def load(ref):
        if ref is None:
            return algebra
        if isinstance(ref, str):
            return GradedAlgebra.from_json(_read_json(map_path.parent / ref))
        return GradedAlgebra.from_json(ref)

    mobj = dict(mobj)
    mobj.setdefault("source", None)
    mobj.setdefault("target", None)
    phi = AlgebraMap.from_json(mobj, load)
    tc, cat = tc_map_lower_bound(phi), cat_map_lower_bound(phi)
    if args.json:
        _dump({"tc_lower_bound": tc, "cat_lower_bound": cat, "field": algebra.field.name}, out)
    else:
        out.write(f"TC(f) >= {tc}; cat(f) >= {cat} (cup-length bounds over {algebra.field.name})\n")
    return EXIT_OK


def cmd_bounds(args, out: TextIO) -> int:
    path = Path(args.file)
    store = load_facts(_read_json(path), path.parent)
    store.propagate()

    target = None
    if args.explain:
        if "." not in args.explain:
            raise ParseError("--explain expects ENTITY.QUANTITY")
        target = tuple(args.explain.rsplit(".", 1))
        try:
            store.interval(*target)
        except (KeyError, ValueError) as exc:
            raise Unsupported(str(exc)) from exc

    if args.json:
        rows = []
        for (entity, quantity), iv in store.intervals().items():
            _, tree = store.query(entity, quantity)
            rows.append({"entity": entity, "quantity": quantity, "lo": iv.lo, "hi": iv.hi, "provenance": tree})
        doc = {"cap": store.cap, "intervals": rows}
        if target:
            doc["explain"] = {"entity": target[0], "quantity": target[1], "text": store.explain(*target)}
        _dump(doc, out)
        return EXIT_OK

    if target:
        out.write(store.explain(*target) + "\n")
        return EXIT_OK
    width = max([len("entity")] + [len(e) for e in store.entities])
    out.write(f"{'entity':<{width}}  quantity  interval\n")
    for (entity, quantity), iv in store.intervals().items():
        shown = "unknown" if (iv.lo, iv.hi) == (0, store.cap) else str(iv)
        out.write(f"{entity:<{width}}  {quantity:<8}  {shown}\n")
    return EXIT_OK


def cmd_planner(args, out: TextIO) -> int:
    if args.name not in BUILTIN:
        raise Unsupported(f"unknown planner {args.name!r}; choose from {sorted(BUILTIN)}")
    try:
        planner = builtin_planner(args.name, args.n)
    except ValueError as exc:
        raise Unsupported(str(exc)) from exc
    report = validate_planner(planner, args.samples, args.seed, args.tol)
    if args.emit_paths:
        write_paths_csv(args.emit_paths, sample_run(planner, args.samples, args.seed))
    if args.json:
        _dump(report.to_dict(), out)
    else:
        status = "PASS" if report.passed else "FAIL"
        out.write(f"{status} {report.planner}: {report.domains} domains, {report.samples} pairs (seed {report.seed})\n")
        out.write(f"  domain counts   {report.domain_counts}\n")
        out.write(f"  coverage        {report.coverage:.6f} (uncovered {report.uncovered}, overlapping {report.overlapping})\n")
        out.write(f"  endpoint error  {report.endpoint_error:.3e} (tol {report.tol:g})\n")
        out.write(f"  max step        {report.max_step:.6f} with K={report.path_samples}\n")
        out.write(f"  deterministic   {report.deterministic}\n")
        for msg in report.failures:
            out.write(f"  ! {msg}\n")
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    parser = argparse.ArgumentParser(prog="maptc", description="TC and LS-category of maps: exact calculators and bounds")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", default=False, help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", parents=[common], help="rank, cat and TC of a homomorphism Z^n -> Z^m")
    p.add_argument("file")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("freehom", parents=[common], help="cat and TC of a homomorphism of free groups")
    p.add_argument("file")
    p.set_defaults(func=cmd_freehom)

    p = sub.add_parser("cuplength", parents=[common], help="cup-length lower bounds")
    p.add_argument("algebra")
    p.add_argument("--map", help="map file f^*; missing source/target default to ALGEBRA")
    p.set_defaults(func=cmd_cuplength)

    p = sub.add_parser("bounds", parents=[common], help="propagate interval facts")
    p.add_argument("file")
    p.add_argument("--explain", metavar="ENTITY.QTY")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("planner", parents=[common], help="validate a builtin motion planner")
    p.add_argument("name", help=f"one of {', '.join(sorted(BUILTIN))}")
    p.add_argument("--n", type=int, default=1, help="dimension")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--emit-paths", metavar="CSV")
    p.set_defaults(func=cmd_planner)
    return parser


def run(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except Contradiction as exc:
        if args.json:
            _dump({"error": "contradiction", "message": str(exc), "first": exc.first, "second": exc.second}, out)
        err.write(f"contradiction: {exc}\n")
        return EXIT_CONTRADICTION
    except InvalidAlgebra as exc:
        err.write(f"validation failed: {exc}\n")
        return EXIT_FAILED
    except (Unsupported, UnsupportedSpace) as exc:
        err.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED
    except (ParseError, ValueError, KeyError, TypeError) as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
