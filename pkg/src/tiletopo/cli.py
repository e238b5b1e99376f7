"""Command-line interface.

Subcommands: analyze, graph, faces, intersections, interior, render, catalog.
Exit codes: 0 success, 2 validation error, 3 a configured cap was exceeded
(a partial report is still emitted).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import boundary as bd
from . import faces as fc
from . import intersections as ix
from . import interior as itr
from .addresses import format_address, format_word
from .neighborgraph import (
    CapExceededError,
    attractor_bounds,
    build_neighbor_graph,
    to_dot,
)
from .render import boundary_points, chaos_points, save_cloud_figure, write_cloud_csv
from .report import AnalysisOptions, analyze
from .tilespec import (
    TWINDRAGON_PARAMS,
    TileSystem,
    TileSystemError,
    load_tile_system,
    twindragon,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CAP = 3


def _add_system_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("spec", nargs="?", help="path to a tile-spec JSON document")
    p.add_argument("--twindragon", metavar="A..G", help="catalog system instead of a spec file")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled operations")
    p.add_argument("--max-vertices", type=int, default=100_000)


def _load_system(args) -> TileSystem:
    if args.twindragon:
        return twindragon(args.twindragon)
    if not args.spec:
        raise TileSystemError("provide a spec path or --twindragon LETTER")
    return load_tile_system(args.spec)


def _build_graph(ts: TileSystem, args):
    bounds = attractor_bounds(ts)
    return build_neighbor_graph(ts, bounds, max_vertices=args.max_vertices)


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    ts = _load_system(args)
    options = AnalysisOptions(
        seed=args.seed,
        max_vertices=args.max_vertices,
        max_word_len=args.max_word_len,
        containment_cap=args.containment_cap,
        intersection_cap=args.containment_cap,
        restrict_face_targets=args.restrict_face_targets,
    )
    report = analyze(ts, options)
    if args.json:
        _write_or_print(json.dumps(report.to_json_dict(), indent=2) + "\n", args.out)
    else:
        _write_or_print(report.to_text(), args.out)
    return EXIT_CAP if report.caps_exceeded else EXIT_OK


def cmd_graph(args) -> int:
    ts = _load_system(args)
    graph = _build_graph(ts, args)
    if args.dot:
        Path(args.dot).write_text(to_dot(graph, reduced=args.reduced), encoding="utf-8")
    summary = {
        "neighbor_count": len(graph.nonroot),
        "edge_count": len(graph.edges),
        "vertices": [list(v) for v in graph.nonroot],
    }
    _write_or_print(json.dumps(summary, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_faces(args) -> int:
    ts = _load_system(args)
    graph = _build_graph(ts, args)
    report = fc.face_report(
        ts, graph, state_cap=args.containment_cap, restrict_targets=args.restrict_face_targets
    )
    payload = {
        "count": len(report.faces()),
        "vertices": [list(v) for v in report.faces()],
        "undecided": [list(v) for v in report.undecided()],
        "by_vertex": {
            str(list(v)): {
                "sufficient": fv.sufficient,
                "exact": fv.exact,
                "dimension": None if fv.dimension_value == float("-inf") else fv.dimension_value,
                "witness": format_word(fv.witness) if fv.witness else None,
            }
            for v, fv in sorted(report.by_vertex.items())
        },
    }
    _write_or_print(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_CAP if report.undecided() else EXIT_OK


def cmd_intersections(args) -> int:
    ts = _load_system(args)
    graph = _build_graph(ts, args)
    face_set = None
    if args.faces_only:
        report = fc.face_report(ts, graph, state_cap=args.containment_cap)
        face_set = report.faces()
    g = ix.build_intersection_graph(
        graph, args.level, faces_only=args.faces_only, face_set=face_set
    )
    cards = g.classify()
    payload = {
        "level": args.level,
        "faces_only": args.faces_only,
        "vertex_count": len(g.vertices),
        "subsets": [
            {
                "members": [list(v) for v in key],
                "cardinality": cards[key].kind,
                "path_count": cards[key].path_count,
            }
            for key in g.vertices
        ],
    }
    _write_or_print(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_interior(args) -> int:
    ts = _load_system(args)
    graph = _build_graph(ts, args)
    report = fc.face_report(ts, graph, state_cap=args.containment_cap)
    cert = itr.interior_connectedness_certificate(
        graph, report.faces(), max_len=args.max_word_len
    )
    payload = {
        "verdict": cert.verdict,
        "reason": cert.reason,
        "words": [format_word(w) for w in cert.words],
        "fixed_point_hits": [
            {"address": format_address(a), "piece": format_word(w)}
            for a, w in cert.fixed_point_hits
        ],
    }
    _write_or_print(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    ts = _load_system(args)
    if args.boundary:
        graph = _build_graph(ts, args)
        vertex = tuple(int(x) for x in args.boundary.strip("()").split(","))
        cloud = boundary_points(graph, vertex, args.depth)
    else:
        cloud = chaos_points(ts, args.points, args.seed)
    out = args.out or "cloud.csv"
    write_cloud_csv(cloud, out)
    if args.fig:
        save_cloud_figure(cloud, args.fig, title=ts.name or "attractor")
    sys.stdout.write(f"wrote {out}\n")
    return EXIT_OK


def cmd_catalog(args) -> int:
    rows = []
    for letter, (a, b) in TWINDRAGON_PARAMS.items():
        rows.append({"letter": letter, "a": a, "b": b})
    _write_or_print(json.dumps(rows, indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiletopo",
        description="Combinatorial topology of self-affine lattice tiles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full analysis report")
    _add_system_args(p)
    p.add_argument("--out", help="write the report to this path")
    p.add_argument("--json", action="store_true", help="emit the JSON twin")
    p.add_argument("--max-word-len", type=int, default=24)
    p.add_argument("--containment-cap", type=int, default=2_000_000)
    p.add_argument(
        "--restrict-face-targets",
        action="store_true",
        help="cover face tests against dimension-filtered candidates only",
    )
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("graph", help="neighbor graph and DOT export")
    _add_system_args(p)
    p.add_argument("--out")
    p.add_argument("--dot", help="write Graphviz output here")
    p.add_argument("--reduced", action="store_true", help="merge each vertex with its negation")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("faces", help="face classification")
    _add_system_args(p)
    p.add_argument("--out")
    p.add_argument("--containment-cap", type=int, default=2_000_000)
    p.add_argument("--restrict-face-targets", action="store_true")
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("intersections", help="pair/triple intersection graphs")
    _add_system_args(p)
    p.add_argument("--out")
    p.add_argument("--level", type=int, choices=(2, 3), default=2)
    p.add_argument("--faces-only", action="store_true")
    p.add_argument("--containment-cap", type=int, default=2_000_000)
    p.set_defaults(func=cmd_intersections)

    p = sub.add_parser("interior", help="interior connectivity certificate")
    _add_system_args(p)
    p.add_argument("--out")
    p.add_argument("--max-word-len", type=int, default=24)
    p.add_argument("--containment-cap", type=int, default=2_000_000)
    p.set_defaults(func=cmd_interior)

    p = sub.add_parser("render", help="point clouds as CSV (and optional figure)")
    _add_system_args(p)
    p.add_argument("--out", help="CSV path (default cloud.csv)")
    p.add_argument("--points", type=int, default=100_000)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--boundary", help="vertex like 1,0,0 to sample its boundary set")
    p.add_argument("--fig", help="also save a scatter figure to this path")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("catalog", help="list the built-in systems")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TileSystemError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except (KeyError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except CapExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
