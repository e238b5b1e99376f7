"""Full analysis pipeline and the two report renderings (text and JSON).

The JSON document is the primary artifact; the text report is rendered from
the same dictionary so numeric fields can never disagree between the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import boundary as bd
from . import faces as fc
from . import intersections as ix
from . import interior as itr
from . import labeledgraph as lg
from .addresses import format_address, format_word
from .neighborgraph import (
    BoundsBox,
    CapExceededError,
    NeighborGraph,
    attractor_bounds,
    build_neighbor_graph,
    check_osc_flag,
    check_tiling_existence,
)
from .tilespec import TileSystem, format_vector, system_determinant, system_spectrum

SCHEMA_ID = "tiletopo-analysis-v1"

SECTION_ORDER = (
    "SYSTEM",
    "SPECTRUM",
    "NEIGHBOR GRAPH",
    "TILING EXISTENCE",
    "BOUNDARY CLASSES",
    "DIMENSIONS",
    "FACES",
    "INTERSECTIONS",
    "POLYHEDRAL STRUCTURE",
    "CENTER/OBSTRUCTION",
    "INTERIOR",
)


@dataclass
class AnalysisOptions:
    seed: int = 0
    bounds_method: str = "rigorous"
    sample_points: int = 100_000
    max_vertices: int = 100_000
    max_word_len: int = 24
    containment_cap: int = 2_000_000
    intersection_cap: int = 2_000_000
    interior_state_cap: int = 200_000
    restrict_face_targets: bool = False
    with_level3: bool = True


@dataclass
class AnalysisReport:
    data: dict
    caps_exceeded: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return self.data

    def to_text(self) -> str:
        return render_text(self.data)


def _vec(v) -> list:
    return [int(x) for x in v]


def _num(x):
    if x is None:
        return None
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def analyze(ts: TileSystem, options: AnalysisOptions | None = None) -> AnalysisReport:
    opt = options or AnalysisOptions()
    caps: list[str] = []
    data: dict = {"schema": SCHEMA_ID}

    det = system_determinant(ts)
    data["system"] = {
        "name": ts.name,
        "dimension": ts.dimension,
        "matrix": [list(row) for row in ts.matrix],
        "digits": [_vec(d) for d in ts.digits],
        "digit_count": ts.m,
        "determinant": det,
    }

    spec = system_spectrum(ts)
    data["spectrum"] = {
        "charpoly": list(spec.charpoly),
        "root_moduli": [float(x) for x in spec.root_moduli],
        "is_expanding": spec.is_expanding,
        "is_selfsimilar_conjugate": spec.is_selfsimilar_conjugate,
        "conjugacy_case": spec.conjugacy_case,
    }

    bounds = attractor_bounds(
        ts, opt.bounds_method, points=opt.sample_points, seed=opt.seed
    )
    graph = build_neighbor_graph(ts, bounds, max_vertices=opt.max_vertices)
    data["neighbor_graph"] = {
        "bounds": {
            "method": bounds.method,
            "lower": list(bounds.lower),
            "upper": list(bounds.upper),
            "seed": bounds.seed,
        },
        "neighbor_count": len(graph.nonroot),
        "edge_count": len(graph.edges),
        "vertices": [_vec(v) for v in graph.nonroot],
    }

    ok, violations = check_tiling_existence(graph)
    tiling: dict = {
        "exists": ok,
        "violations": [{"vertex": _vec(v), "label": lab} for v, lab in violations],
        "osc_plausible": check_osc_flag(graph),
    }
    if ok:
        witness = itr.tiling_witness_word(graph)
        replay = itr.replay_suffix_cover(graph, witness, graph.nonroot)
        tiling["witness_word"] = format_word(witness)
        tiling["witness_replay_ok"] = replay
    data["tiling"] = tiling

    classification = bd.classify_cardinality(graph)
    scc = classification.decomposition
    spectra = bd.component_spectra(ts, graph, scc)
    dims = bd.vertex_dimensions(scc, spectra, ts)
    matrix_singletons = bd.point_neighbor_matrix_test(graph)
    data["boundary"] = {
        "counts": {
            kind: classification.count(kind)
            for kind in (lg.SINGLETON, lg.FINITE, lg.COUNTABLY_INFINITE, lg.UNCOUNTABLE)
        },
        "matrix_test_singletons": [_vec(v) for v in sorted(matrix_singletons)],
        "classes": {
            format_vector(v): {
                "cardinality": c.kind,
                "path_count": c.path_count,
                "component": classification.scc_of[v],
            }
            for v, c in sorted(classification.cardinality.items())
        },
    }

    data["components"] = [
        {
            "id": s.component_id,
            "size": s.size,
            "kind": s.kind,
            "perron_root": _num(s.perron),
            "modified_dimension": _num(s.modified_dimension),
        }
        for s in spectra
    ]
    data["dimensions"] = {
        "by_vertex": {format_vector(v): _num(d) for v, d in sorted(dims.items())},
        "hausdorff_selfsimilar": _num(
            bd.hausdorff_dimension_selfsimilar(ts, max(s.perron for s in spectra))
        )
        if spectra
        else None,
    }

    report = fc.face_report(
        ts,
        graph,
        state_cap=opt.containment_cap,
        restrict_targets=opt.restrict_face_targets,
    )
    faces = report.faces()
    undecided = report.undecided()
    if undecided:
        caps.append("faces")
    data["faces"] = {
        "count": len(faces),
        "vertices": [_vec(v) for v in faces],
        "undecided": [_vec(v) for v in undecided],
        "by_vertex": {
            format_vector(v): {
                "sufficient": fv.sufficient,
                "exact": fv.exact,
                "dimension": _num(fv.dimension_value),
                "witness": format_word(fv.witness) if fv.witness else None,
            }
            for v, fv in sorted(report.by_vertex.items())
        },
    }

    inter: dict = {}
    poly: dict = {}
    try:
        g2 = ix.build_intersection_graph(
            graph, 2, faces_only=True, face_set=faces, cap=opt.intersection_cap
        )
        cards2 = g2.classify()
        subset_dims = ix.subset_dimensions(ts, g2)
        inter["level2_faces"] = {
            "vertex_count": len(g2.vertices),
            "pairs": [
                {
                    "members": [_vec(v) for v in key],
                    "cardinality": cards2[key].kind,
                    "path_count": cards2[key].path_count,
                    "modified_dimension": _num(subset_dims.get(key)),
                }
                for key in g2.vertices
            ],
        }
        opposite = ix.opposite_face_pairs(g2)
        inter["opposite_face_pairs"] = [
            {
                "members": [_vec(v) for v in key],
                "cardinality": cards2[key].kind,
                "modified_dimension": _num(subset_dims.get(key)),
            }
            for key in opposite
        ]
        one_points = ix.one_point_intersections(g2)
        inter["one_point_pairs"] = [
            {"members": [_vec(v) for v in key], "address": format_address(addr)}
            for key, addr in one_points
        ]
        g3 = None
        if opt.with_level3:
            g3 = ix.build_intersection_graph(
                graph, 3, faces_only=True, face_set=faces, cap=opt.intersection_cap
            )
            inter["level3_faces"] = {"vertex_count": len(g3.vertices)}
        polyrep = ix.polyhedral_report(ts, graph, faces, g2, g3)
        poly = {
            "faces": polyrep.face_count,
            "edges": len(polyrep.edge_pairs),
            "vertices": len(polyrep.corner_points),
            "euler": polyrep.euler_characteristic,
            "corner_points": [
                {
                    "address": format_address(p.address),
                    "subsets": [[_vec(v) for v in subset] for subset in p.subsets],
                }
                for p in polyrep.corner_points
            ],
        }
    except CapExceededError as exc:
        caps.append(str(exc))
        inter["cap_exceeded"] = str(exc)
        poly = {"cap_exceeded": str(exc)}
    data["intersections"] = inter
    data["polyhedral"] = poly

    center: dict = {}
    if ts.m == 2:
        addr = ix.center_address(graph)
        center["address"] = format_address(addr) if addr else None
        obstruction = ix.simple_connectedness_obstruction(graph)
        if obstruction.obstructed:
            center["obstruction"] = {
                "vertex": _vec(obstruction.vertex),
                "witness_address": format_address(obstruction.witness_address),
                "all_vertices": [_vec(v) for v in obstruction.all_vertices],
            }
        else:
            center["obstruction"] = None
    else:
        center["address"] = None
        center["obstruction"] = None
        center["note"] = "center analysis applies to two-digit systems"
    data["center"] = center

    if ts.m == 2:
        cert = itr.interior_connectedness_certificate(
            graph,
            faces,
            max_len=opt.max_word_len,
            state_cap=opt.interior_state_cap,
        )
    else:
        cert = itr.ConnectivityCertificate(
            (), (), (), "inconclusive", "scheme requires a two-digit system with central symmetry"
        )
    data["interior"] = {
        "verdict": cert.verdict,
        "reason": cert.reason,
        "words": [format_word(w) for w in cert.words],
        "face_links": [
            {
                "pieces": [format_word(l.piece_a), format_word(l.piece_b)],
                "padded": [format_word(l.padded_a), format_word(l.padded_b)],
                "shared_vertex": _vec(l.shared_vertex),
            }
            for l in cert.face_links
        ],
        "fixed_point_hits": [
            {"address": format_address(a), "piece": format_word(w)}
            for a, w in cert.fixed_point_hits
        ],
    }

    return AnalysisReport(data=data, caps_exceeded=caps)


def render_text(data: dict) -> str:
    out: list[str] = []

    def line(s: str = ""):
        out.append(s)

    sys = data["system"]
    line("SYSTEM")
    line(f"  name: {sys['name'] or '(unnamed)'}")
    line(f"  dimension: {sys['dimension']}")
    line(f"  matrix: {sys['matrix']}")
    line(f"  digits: {sys['digits']}")
    line(f"  digit_count: {sys['digit_count']}")
    line(f"  determinant: {sys['determinant']}")
    line()

    spec = data["spectrum"]
    line("SPECTRUM")
    line(f"  charpoly: {spec['charpoly']}")
    line(f"  root_moduli: {[round(x, 6) for x in spec['root_moduli']]}")
    line(f"  is_expanding: {spec['is_expanding']}")
    line(f"  is_selfsimilar_conjugate: {spec['is_selfsimilar_conjugate']}")
    line(f"  conjugacy_case: {spec['conjugacy_case']}")
    line()

    ng = data["neighbor_graph"]
    line("NEIGHBOR GRAPH")
    line(f"  neighbor_count: {ng['neighbor_count']}")
    line(f"  edge_count: {ng['edge_count']}")
    line(f"  bounds_method: {ng['bounds']['method']}")
    line()

    t = data["tiling"]
    line("TILING EXISTENCE")
    line(f"  exists: {t['exists']}")
    line(f"  osc_plausible: {t['osc_plausible']}")
    if t.get("witness_word") is not None:
        line(f"  witness_word: {t['witness_word']}")
        line(f"  witness_replay_ok: {t['witness_replay_ok']}")
    if t["violations"]:
        line(f"  violations: {t['violations']}")
    line()

    b = data["boundary"]
    line("BOUNDARY CLASSES")
    for kind, count in b["counts"].items():
        line(f"  {kind}: {count}")
    line()

    line("DIMENSIONS")
    for comp in data["components"]:
        line(
            f"  component {comp['id']} (size {comp['size']}, {comp['kind']}): "
            f"perron_root={comp['perron_root']} modified_dimension={comp['modified_dimension']}"
        )
    line(f"  hausdorff_selfsimilar: {data['dimensions']['hausdorff_selfsimilar']}")
    line()

    f = data["faces"]
    line("FACES")
    line(f"  count: {f['count']}")
    line(f"  vertices: {f['vertices']}")
    if f["undecided"]:
        line(f"  undecided: {f['undecided']}")
    line()

    inter = data["intersections"]
    line("INTERSECTIONS")
    if "cap_exceeded" in inter:
        line(f"  cap_exceeded: {inter['cap_exceeded']}")
    else:
        line(f"  level2_face_pairs: {inter['level2_faces']['vertex_count']}")
        line(f"  one_point_pairs: {len(inter['one_point_pairs'])}")
        line(f"  opposite_face_pairs: {len(inter['opposite_face_pairs'])}")
        if "level3_faces" in inter:
            line(f"  level3_face_triples: {inter['level3_faces']['vertex_count']}")
    line()

    poly = data["polyhedral"]
    line("POLYHEDRAL STRUCTURE")
    if "cap_exceeded" in poly:
        line(f"  cap_exceeded: {poly['cap_exceeded']}")
    else:
        line(f"  faces: {poly['faces']}")
        line(f"  edges: {poly['edges']}")
        line(f"  vertices: {poly['vertices']}")
        line(f"  euler: {poly['euler']}")
    line()

    c = data["center"]
    line("CENTER/OBSTRUCTION")
    line(f"  center_address: {c.get('address')}")
    if c.get("obstruction"):
        ob = c["obstruction"]
        line(f"  obstruction: center lies in the boundary set of {ob['vertex']}")
        line(f"  witness_address: {ob['witness_address']}")
    else:
        line("  obstruction: no_obstruction_found")
    line()

    i = data["interior"]
    line("INTERIOR")
    line(f"  verdict: {i['verdict']}")
    if i["reason"]:
        line(f"  reason: {i['reason']}")
    if i["words"]:
        line(f"  words: {i['words']}")
    line()
    return "\n".join(out)
