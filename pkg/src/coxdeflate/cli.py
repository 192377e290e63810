"""Command-line front end.

    coxdeflate diagram incidence --q 2 --gons 8
    coxdeflate closure y --arms 3 3 3 --n 8 --cap 14
    coxdeflate identify y --arms 3 3 3 --n 8 --cap 14
    coxdeflate enumerate named petersen --n 6 --k 1
    coxdeflate verify-all --skip stretch

Reports are JSON with sorted keys; wall-clock timings sit in a separate
top-level ``timings`` field so the rest is byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, gf2
from .acceptance import format_result, run_criteria
from .cosets import CosetError, coxeter_presentation, gon_relator, todd_coxeter
from .diagrams import (
    Diagram,
    DiagramError,
    NoGonError,
    build_incidence_graph,
    build_named,
    build_y_diagram,
    free_ngons,
    is_isomorphic,
)
from .forms import DegenerateFormError, FormError
from .pipeline import identify
from .rootlat import CapExceededError, ClosureError, NoFixpointError, NonSimplyLacedError, closure

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_CAP = 4
EXIT_NOT_SIMPLY_LACED = 5
EXIT_NO_FIXPOINT = 6
EXIT_DEGENERATE = 7
EXIT_FORM = 8
EXIT_COSETS_CAPPED = 9
EXIT_NO_GON = 10

# most specific first
_ERROR_CODES = [
    (CapExceededError, EXIT_CAP),
    (NonSimplyLacedError, EXIT_NOT_SIMPLY_LACED),
    (NoFixpointError, EXIT_NO_FIXPOINT),
    (ClosureError, EXIT_NO_FIXPOINT),
    (DegenerateFormError, EXIT_DEGENERATE),
    (FormError, EXIT_FORM),
    (NoGonError, EXIT_NO_GON),
    (DiagramError, EXIT_INPUT),
    (CosetError, EXIT_INPUT),
    (OSError, EXIT_INPUT),
    (ValueError, EXIT_INPUT),
]


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- diagrams


def _add_diagram_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("kind", choices=["y", "incidence", "named", "file"], help="diagram family")
    p.add_argument("name", nargs="?", help="petersen, cube or cycle for 'named'; a JSON path for 'file'")
    p.add_argument("--arms", type=int, nargs="+", help="arm lengths for a Y diagram")
    p.add_argument("--q", type=int, help="field order for an incidence graph (2 or 3)")
    p.add_argument("--size", type=int, help="node count for 'named cycle' (defaults to --n)")


def _diagram(args) -> Diagram:
    if args.kind == "y":
        if not args.arms:
            raise DiagramError("--arms is required for a Y diagram")
        return build_y_diagram(tuple(args.arms))
    if args.kind == "incidence":
        if args.q is None:
            raise DiagramError("--q is required for an incidence graph")
        return build_incidence_graph(args.q)
    if args.kind == "named":
        if not args.name:
            raise DiagramError("named diagrams need a name")
        size = args.size if args.size is not None else args.n
        return build_named(args.name, size if args.name == "cycle" else None)
    if not args.name:
        raise DiagramError("'file' needs a path")
    try:
        return Diagram.from_json(Path(args.name).read_text())
    except OSError as exc:
        raise DiagramError(f"cannot read {args.name}: {exc}")


# ---------------------------------------------------------------- output


def _emit(args, result: dict, timings: dict | None = None, dot: str | None = None) -> None:
    if args.format == "dot":
        if dot is None:
            raise ConfigError("this command has no DOT rendering")
        text = dot
    elif args.format == "table":
        text = "\n".join(f"{k:<22} {_short(v)}" for k, v in sorted(result.items()))
        if timings:
            text += "\n" + "\n".join(f"{'time.' + k:<22} {v:.3f} s" for k, v in sorted(timings.items()))
        text += "\n"
    else:
        doc = {"result": result}
        if timings is not None:
            doc["timings"] = {k: round(v, 6) for k, v in timings.items()}
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _short(v) -> str:
    s = json.dumps(v) if not isinstance(v, str) else v
    return s if len(s) <= 100 else s[:97] + "..."


# ---------------------------------------------------------------- commands


def cmd_diagram(args) -> int:
    d = _diagram(args)
    result = {"nodes": d.n, "labels": list(d.labels), "edges": [list(e) for e in d.edges()]}
    if args.gons:
        gons = free_ngons(d, args.gons)
        result["gon_length"] = args.gons
        result["gons"] = [list(g) for g in gons]
    if args.dot:
        Path(args.dot).write_text(d.to_dot())
    _emit(args, result, dot=d.to_dot())
    return EXIT_OK


def _target_for(m: int, target_q: int | None) -> tuple[str, Diagram] | None:
    if target_q is not None:
        return f"incidence({target_q})", build_incidence_graph(target_q)
    for q in (2, 3):
        if m == 2 * (q * q + q + 1):
            return f"incidence({q})", build_incidence_graph(q)
    return None


def cmd_closure(args) -> int:
    d = _diagram(args)
    t = time.perf_counter()
    state = closure(d, args.n, args.cap, merge_policy=args.merge_policy)
    secs = time.perf_counter() - t
    diffs = [gf2.vec_from_bits([int(x) % 2 for x in (a.array - b.array)]) for a, b in state.relations]
    result = state.report()
    result["relation_rank"] = gf2.rank(diffs)
    target = _target_for(len(state.nodes), args.target)
    summary = f"{len(state.nodes)} nodes"
    if target is not None:
        iso = is_isomorphic(state.diagram(), target[1])
        result["target"] = target[0]
        result["isomorphic"] = iso is not None
        result["bijection"] = None if iso is None else [iso[i] for i in range(len(iso))]
        summary += f", isomorphic to {target[0]}: {'yes' if iso is not None else 'no'}"
    summary += f", relations: {result['relation_rank']} independent"
    result["summary"] = summary
    _emit(args, result, {"closure": secs}, dot=state.diagram().to_dot("closure"))
    return EXIT_OK


def cmd_identify(args) -> int:
    d = _diagram(args)
    n = None if args.no_closure else args.n
    try:
        ident = identify(d, n, args.cap, use_relations=not args.no_relations)
    except DegenerateFormError as exc:
        result = {"error": "ambient radical nontrivial, quotient skipped", "diagnostic": str(exc)}
        _emit(args, result, {})
        return EXIT_DEGENERATE
    if args.certificate:
        Path(args.certificate).write_text(json.dumps(ident.certificate(), sort_keys=True) + "\n")
    _emit(args, ident.report(), ident.timings)
    return EXIT_OK


def _parse_subgroup(text: str | None, d: Diagram) -> list[tuple[int, ...]]:
    """Words separated by ';', letters by ',' ; a leading '-' inverts a letter."""
    if not text:
        return []
    words = []
    for chunk in text.split(";"):
        word = []
        for tok in chunk.split(","):
            tok = tok.strip()
            if not tok:
                continue
            neg = tok.startswith("-")
            lab = tok[1:] if neg else tok
            try:
                g = d.index(lab)
            except (KeyError, ValueError):
                raise ConfigError(f"unknown generator {lab!r} in --subgroup")
            word.append(~g if neg else g)
        if word:
            words.append(tuple(word))
    return words


def cmd_enumerate(args) -> int:
    d = _diagram(args)
    gons = free_ngons(d, args.n)
    chosen = list(range(len(gons)))
    if args.gon_subset:
        chosen = [int(x) for x in args.gon_subset.split(",")]
        if any(not 0 <= c < len(gons) for c in chosen):
            raise ConfigError(f"--gon-subset indices must lie in 0..{len(gons) - 1}")
    pres = coxeter_presentation(d).with_relators(gon_relator(gons[c], args.k) for c in chosen)
    sub = _parse_subgroup(args.subgroup, d)
    ct = todd_coxeter(pres, sub, max_cosets=args.max_cosets)
    result = {
        "generators": pres.ngens,
        "relators": len(pres.relators),
        "gons": len(gons),
        "gons_used": chosen,
        "k": args.k,
        "subgroup": [list(w) for w in sub],
        "status": ct.status,
        "cosets": ct.count if ct.closed else None,
        "defined": ct.defined,
    }
    if ct.closed:
        result["verified"] = ct.verify(pres, sub)
        result["checksum"] = ct.checksum()
        if args.table_out:
            ct.dump(args.table_out)
    _emit(args, result, {"enumerate": ct.seconds})
    if not ct.closed:
        return EXIT_COSETS_CAPPED
    return EXIT_OK if result["verified"] else EXIT_CHECK_FAILED


def cmd_verify_all(args) -> int:
    skip = set(args.skip or [])
    results = run_criteria(skip_stretch="stretch" in skip, only=args.only)
    lines = [format_result(r) for r in results]
    failed = [r for r in results if not r.ok]
    lines.append(f"{len(results) - len(failed)}/{len(results)} criteria without failure")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coxdeflate", description="Deflated Coxeter groups: closure, mod-2 identification, coset enumeration.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat JSON file of option values; flags override it")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=["json", "dot", "table"], default="json")

    p = sub.add_parser("diagram", help="build a diagram, list free n-gons, emit JSON or DOT")
    _add_diagram_args(p)
    p.add_argument("--n", type=int, help="cycle length for 'named cycle'")
    p.add_argument("--gons", type=int, help="list the free gons of this length")
    p.add_argument("--dot", help="also write DOT to this path")
    common(p)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("closure", help="close a diagram under extending nodes")
    _add_diagram_args(p)
    p.add_argument("--n", type=int, default=8, help="gon size; chains have n-1 nodes")
    p.add_argument("--cap", type=int, default=14, help="maximum number of node classes")
    p.add_argument("--merge-policy", choices=["pattern_merge", "none"], default="pattern_merge")
    p.add_argument("--target", type=int, help="compare against incidence(q); default picks by node count")
    common(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("identify", help="closure, mod-2 quotient, form type and group order")
    _add_diagram_args(p)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--cap", type=int, default=14)
    p.add_argument("--no-relations", action="store_true", help="skip the closure's relations")
    p.add_argument("--no-closure", action="store_true", help="use the diagram as it is")
    p.add_argument("--certificate", help="write the order certificate JSON here")
    common(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("enumerate", help="Todd-Coxeter on a deflated presentation")
    _add_diagram_args(p)
    p.add_argument("--n", type=int, required=False, default=None, help="gon size to deflate")
    p.add_argument("--k", type=int, default=1, help="flation order")
    p.add_argument("--max-cosets", type=int, default=2_000_000)
    p.add_argument("--subgroup", help="subgroup words, e.g. 'x0;x1,x2'")
    p.add_argument("--gon-subset", help="comma-separated gon indices to deflate (default all)")
    p.add_argument("--table-out", help="dump the closed coset table here")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-all", help="run every acceptance check")
    p.add_argument("--skip", action="append", choices=["stretch"], help="skip a group of checks")
    p.add_argument("--only", type=int, nargs="+", help="run only these criterion numbers")
    p.add_argument("--config", help="flat JSON file of option values; flags override it")
    p.add_argument("--out", help="also write the summary here")
    p.set_defaults(func=cmd_verify_all)
    return parser


def _load_config(argv: list[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        data = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load config {known.config}: {exc}")
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise ConfigError("config must be one flat JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _validate(args) -> None:
    for key in ("n", "k", "cap", "max_cosets", "q", "size", "gons"):
        v = getattr(args, key, None)
        if v is not None and (not isinstance(v, int) or v < 1):
            raise ConfigError(f"--{key.replace('_', '-')} must be a positive integer")
    if args.command == "enumerate" and args.n is None:
        raise ConfigError("enumerate needs --n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        config = _load_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    dests = {name: {a.dest for a in sp._actions} - {"help", "config"} for name, sp in subparsers.choices.items()}
    if config:
        for sp in subparsers.choices.values():
            sp.set_defaults(**config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    unknown = set(config) - dests[args.command]
    if unknown:
        print(f"error: unknown config keys {sorted(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _validate(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:
        for cls, code in _ERROR_CODES:
            if isinstance(exc, cls):
                print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
