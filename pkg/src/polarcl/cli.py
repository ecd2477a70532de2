"""Command-line interface.

Subcommands: space, scheme, check, construct, search, verify-paper.
Spaces are given as shorthand ``K:n:q`` (e.g. ``W:5:2``, ``Q+:7:2``,
``H:4:4``) or as a JSON descriptor.  Exit status of ``check``: 0 degree one,
3 Cameron-Liebler only, 4 neither, 2 bad input.  Any command that runs
out of its ``--budget`` exits with 5.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from . import __version__
from .clsets import CLError, GeneratorSet, check as cl_check
from .constructions import ConstructionError, ConstructionSpec, build_construction
from .geometry import CapacityError, PolarSpaceKind, SpaceError, build_space, load_space
from .scheme import (
    build_scheme,
    eigenvalue_matrix,
    predicted_coincidences,
    multiplicities,
    phi_at_one,
    phi_valuation,
    pmatrix_csv,
    closed_form_phi,
    verify_coincidences,
)
from .search import MODES, SearchCapacityError, SearchError, SearchJob, run_job

EXIT_DEGREE_ONE, EXIT_INPUT, EXIT_CL_ONLY, EXIT_NEITHER, EXIT_BUDGET = 0, 2, 3, 4, 5


class InputError(Exception):
    pass


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _kind(args) -> PolarSpaceKind:
    text = getattr(args, "space_pos", None) or args.space
    if not text:
        raise InputError("no space given (use --space K:n:q or a JSON descriptor)")
    return PolarSpaceKind.parse(text)


def _json_value(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, float) and v == float("inf"):
        return "inf"
    return v


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# handlers


def cmd_space(args) -> int:
    kind = _kind(args)
    if args.action == "stats":
        stats = {
            "space": kind.label,
            "descriptor": kind.descriptor(),
            "points": kind.num_points,
            "generators": kind.num_generators,
            "e": str(kind.e),
            "type": _type(kind),
        }
        if args.enumerate:
            space = build_space(kind, cap=args.cap)
            stats["points"], stats["generators"] = space.num_points, space.num_generators
        with _output(args.out) as fh:
            fmt = args.format or "text"
            if fmt == "json":
                fh.write(json.dumps(stats) + "\n")
            elif fmt == "csv":
                keys = ["space", "points", "generators", "e", "type"]
                fh.write(_csv([keys, [stats[k] for k in keys]]))
            else:
                fh.write(f"points={stats['points']} generators={stats['generators']} "
                         f"e={stats['e']} type={stats['type']}\n")
        return 0
    space = build_space(kind, cap=args.cap)
    with _output(args.out) as fh:
        json.dump(space.export(), fh)
        fh.write("\n")
    return 0


def _type(kind):
    from .geometry import classify_type

    return classify_type(kind)


def cmd_scheme(args) -> int:
    kind = _kind(args)
    d, e, q = kind.d, kind.e, kind.q
    fmt = args.format
    with _output(args.out) as fh:
        if args.action == "pmatrix":
            P = eigenvalue_matrix(d, e, q)
            if fmt == "json":
                fh.write(json.dumps({"space": kind.descriptor(), "P": [list(r) for r in P]}) + "\n")
            else:
                fh.write(pmatrix_csv(P))
        elif args.action == "eigenspaces":
            if args.compute:
                dims = build_scheme(load_space(kind)).eigenspace_dims(compute=True)
            else:
                dims = list(multiplicities(d, e, q))
            if fmt == "csv":
                fh.write(_csv([["j", "dim"]] + [[j, m] for j, m in enumerate(dims)]))
            else:
                fh.write(json.dumps({"space": kind.descriptor(), "dimensions": dims}) + "\n")
        elif args.action == "coincidences":
            found = verify_coincidences(d, e, q)
            predicted = predicted_coincidences(d, e)
            if fmt == "json":
                fh.write(json.dumps({"space": kind.descriptor(), "coincidences": found,
                                     "predicted": predicted, "agrees": found == predicted}) + "\n")
            elif fmt == "csv":
                fh.write(_csv([["j", "i"]] + [list(p) for p in found]))
            else:
                fh.write(" ".join(f"({j},{i})" for j, i in found) + "\n")
        elif args.action == "phi":
            rows = []
            i_values = [args.i] if args.i is not None else range(1, d + 1)
            for i in i_values:
                if not 1 <= i <= d:
                    raise InputError(f"--i must lie in 1..{d}")
                for j in range(d + 1):
                    rows.append({"i": i, "j": j,
                                 "phi": _json_value(phi_valuation(d, e, q, i, j)),
                                 "table": _json_value(closed_form_phi(d, e, i, j)),
                                 "phi_at_1": _json_value(phi_at_one(e, i))})
            if fmt == "json":
                fh.write(json.dumps({"space": kind.descriptor(), "phi": rows}) + "\n")
            else:
                keys = ["i", "j", "phi", "table", "phi_at_1"]
                fh.write(_csv([keys] + [["" if r[k] is None else r[k] for k in keys] for r in rows]))
    return 0


def _load_set(path: str, space_text: str | None) -> GeneratorSet:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read generator set: {exc}") from None
    if not isinstance(data, dict) or "indices" not in data:
        raise InputError("generator set file needs 'space' and 'indices'")
    if space_text:
        data = dict(data, space=PolarSpaceKind.parse(space_text).descriptor())
    if "space" not in data:
        raise InputError("generator set file needs 'space' and 'indices'")
    return GeneratorSet.from_json(data)


def cmd_check(args) -> int:
    L = _load_set(args.file, args.space)
    report = cl_check(L)
    with _output(args.out) as fh:
        fh.write(report.dumps() + "\n")
    if report.is_degree_one:
        return EXIT_DEGREE_ONE
    return EXIT_CL_ONLY if report.is_cl else EXIT_NEITHER


def cmd_construct(args) -> int:
    if args.spec:
        if args.name and not args.space_pos:
            # with --spec the single positional is the space
            args.space_pos, args.name = args.name, None
        with open(args.spec, encoding="utf-8") as fh:
            spec = ConstructionSpec.from_json(json.load(fh))
    else:
        if not args.name:
            raise InputError("give a construction name or --spec")
        params = {k: v for k, v in (("point", args.point), ("generator", args.generator),
                                    ("class", args.cls), ("which", args.which),
                                    ("x", args.x), ("alpha", args.alpha)) if v is not None}
        spec = ConstructionSpec(args.name, params)
    space = load_space(_kind(args))
    L = build_construction(space, spec, budget=args.budget)
    with _output(args.out) as fh:
        fh.write(L.dumps() + "\n")
    return 0


def cmd_search(args) -> int:
    if args.job:
        with open(args.job, encoding="utf-8") as fh:
            job = SearchJob.from_json(json.load(fh))
    else:
        if not args.mode:
            raise InputError("give a search mode or --job")
        indices = None
        if args.set:
            indices = list(_load_set(args.set, None).indices)
        job = SearchJob(_kind(args).descriptor(), args.mode, x=args.x, one_class=args.one_class,
                        budget=args.budget, indices=indices)
    with _output(args.out) as fh:
        for record in run_job(job, max_nodes=args.max_nodes):
            fh.write(json.dumps(record, default=str, sort_keys=True) + "\n")
    if args.job:
        with open(args.job, "w", encoding="utf-8") as fh:
            fh.write(job.dumps() + "\n")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    manifest = run_suite(args.scope, progress=lambda r: print(r.line(), file=sys.stderr))
    manifest["threads"] = args.threads
    with _output(args.out) as fh:
        fh.write(json.dumps(manifest, indent=2) + "\n")
    return 0 if manifest["passed"] else 1


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, space_positional: bool = True):
    if space_positional:
        p.add_argument("space_pos", nargs="?", metavar="SPACE",
                       help="space shorthand K:n:q or JSON descriptor")
    p.add_argument("--space", help="space shorthand K:n:q or JSON descriptor")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--budget", type=float, default=10.0, help="time budget in CPU seconds")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; work runs single-threaded")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarcl",
                                     description="Cameron-Liebler sets of generators in finite polar spaces")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", help="build a polar space or print its counts")
    p.add_argument("action", choices=("stats", "build"))
    _common(p)
    p.add_argument("--format", choices=("text", "json", "csv"))
    p.add_argument("--cap", type=int, default=100_000, help="generator-count cap")
    p.add_argument("--enumerate", action="store_true", help="stats from a full enumeration")
    p.set_defaults(func=cmd_space)

    p = sub.add_parser("scheme", help="eigenvalues, eigenspaces, coincidences, valuations")
    p.add_argument("action", choices=("pmatrix", "eigenspaces", "coincidences", "phi"))
    _common(p)
    p.add_argument("--format", choices=("text", "json", "csv"))
    p.add_argument("--i", type=int, help="relation index for phi")
    p.add_argument("--compute", action="store_true",
                   help="eigenspaces: compute dimensions from the adjacency matrices")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("check", help="report on a generator set file")
    p.add_argument("file", help="generator set JSON ('-' for stdin)")
    _common(p, space_positional=False)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", help="build a named example set")
    p.add_argument("name", nargs="?", help="one of: " + ", ".join(ConstructionSpec.NAMES))
    _common(p)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--spec", help="construction spec JSON file")
    p.add_argument("--point", type=int)
    p.add_argument("--generator", type=int)
    p.add_argument("--class", dest="cls", type=int)
    p.add_argument("--which", type=int)
    p.add_argument("--x", type=int)
    p.add_argument("--alpha", type=int)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", help="exhaustive and bounded searches")
    p.add_argument("mode", nargs="?", choices=MODES)
    _common(p)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--x", type=int, default=1)
    p.add_argument("--one-class", type=int, choices=(0, 1))
    p.add_argument("--set", help="generator set file for max_disjoint")
    p.add_argument("--job", help="job file; resumed from and updated with its cursor")
    p.add_argument("--max-nodes", type=int, help="stop after this many search nodes")
    p.set_defaults(func=cmd_search, budget=None)

    p = sub.add_parser("verify-paper", help="run the acceptance suite")
    p.add_argument("--scope", choices=("all", "q2", "table4", "classification"), default="all")
    _common(p, space_positional=False)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scheme" and args.format is None:
        args.format = "text" if args.action == "coincidences" else (
            "csv" if args.action in ("pmatrix", "phi") else "json")
    try:
        return args.func(args)
    except (InputError, SpaceError, CLError, ConstructionError, SearchError,
            CapacityError, SearchCapacityError, ValueError, KeyError) as exc:
        print(f"polarcl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TimeoutError as exc:
        print(f"polarcl: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
