"""Intersections of boundary sets: pair and triple graphs, corner points,
center addresses, and the simple-connectedness obstruction.

The level-l intersection graph has l-sets of neighbor vectors as vertices;
an edge with label i needs an injection matching each member to a label-i
successor with all images distinct. Pruning leaves exactly the l-sets whose
boundary sets share at least one point, and path analysis on the pruned graph
mirrors the single-set case.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from . import labeledgraph as lg
from .addresses import Address, address_membership, make_address
from .boundary import modified_dimension, perron_root
from .exactmat import mat_vec, vec_neg
from .labeledgraph import Cardinality, LabeledDigraph
from .neighborgraph import CapExceededError, NeighborGraph
from .tilespec import TileSystem

DEFAULT_COMBINATION_CAP = 2_000_000


class IntersectionGraph:
    """Pruned graph of l-wise boundary intersections."""

    def __init__(self, base: NeighborGraph, level: int, graph: LabeledDigraph, injections: Mapping):
        self.base = base
        self.level = level
        self.graph = graph
        self.injections = dict(injections)

    @property
    def vertices(self) -> tuple:
        return self.graph.vertices

    @property
    def edges(self) -> tuple:
        return self.graph.edges

    def classify(self) -> dict:
        return lg.classify_path_cardinality(self.graph)


def build_intersection_graph(
    g: NeighborGraph,
    level: int,
    *,
    faces_only: bool = False,
    face_set: Sequence[tuple] | None = None,
    cap: int = DEFAULT_COMBINATION_CAP,
) -> IntersectionGraph:
    """Build the level-2 or level-3 intersection graph.

    With faces_only, the base vertex set is restricted to the given faces
    before taking subsets. Candidate edges apply each label to all members;
    iterated removal of out-degree-0 subsets then leaves the realizable ones.
    """
    if level not in (2, 3):
        raise ValueError("intersection graphs are built for levels 2 and 3 only")
    if faces_only:
        if face_set is None:
            raise ValueError("faces_only requires the face set")
        base_vertices = tuple(sorted(face_set))
    else:
        base_vertices = g.nonroot

    subsets = [tuple(sorted(c)) for c in combinations(base_vertices, level)]
    if len(subsets) > cap:
        raise CapExceededError("intersection subsets", cap)

    alive = set(subsets)
    edges: dict[tuple, list] = {}
    injections: dict = {}

    def successor_edges(key: tuple):
        found = edges.get(key)
        if found is None:
            found = []
            for label in range(1, g.m + 1):
                options = [g.successors(v, label) for v in key]
                if any(not opt for opt in options):
                    continue
                seen_targets = set()
                for image in product(*options):
                    if len(set(image)) != len(image):
                        continue
                    target = tuple(sorted(image))
                    if (label, target) in seen_targets:
                        continue
                    seen_targets.add((label, target))
                    found.append((label, target, tuple(zip(key, image))))
            edges[key] = found
        return found

    changed = True
    while changed:
        changed = False
        for key in sorted(alive):
            if not any(target in alive for _lab, target, _phi in successor_edges(key)):
                alive.discard(key)
                changed = True

    final_edges = []
    for key in sorted(alive):
        for label, target, phi in successor_edges(key):
            if target in alive:
                final_edges.append((key, target, label))
                injections.setdefault((key, target, label), phi)

    graph = LabeledDigraph(sorted(alive), final_edges, g.m)
    return IntersectionGraph(g, level, graph, injections)


def one_point_intersections(g2: IntersectionGraph) -> tuple[tuple[tuple, Address], ...]:
    """Subsets whose boundary intersection is a single point, with its address."""
    cards = g2.classify()
    out = []
    for key in g2.vertices:
        if cards[key].kind == lg.SINGLETON:
            pre, per = lg.unique_path_labels(g2.graph, key)
            out.append((key, make_address(pre, per)))
    return tuple(out)


def finite_intersection_addresses(g2: IntersectionGraph) -> dict:
    """Addresses of all paths from finite-class subsets (singletons included)."""
    cards = g2.classify()
    result = {}
    for key in g2.vertices:
        card = cards[key]
        if card.kind in (lg.SINGLETON, lg.FINITE):
            paths = lg.finite_path_labels(g2.graph, key)
            result[key] = tuple(make_address(pre, per) for pre, per in paths)
    return result


def _single_arrow_subgraph(g: NeighborGraph) -> LabeledDigraph:
    """Edges not arising from equal digit indices, i.e. targets other than Mk."""
    edges = []
    for u, v, label in g.edges:
        if v != tuple(mat_vec(g.system.matrix, u)):
            edges.append((u, v, label))
    return LabeledDigraph(g.vertices, edges, g.m)


def center_address(g: NeighborGraph) -> Address | None:
    """Address of the symmetry center read off a loop-free-label path.

    For two-digit systems, a root path that never uses a double edge has the
    property that its flipped word names the same point, which pins the point
    at the symmetry center (k_1 + k_2)/2. Returns the canonical address of
    the shortest such path into a cycle, or None when no such path exists.
    """
    if g.m != 2:
        raise ValueError("center addresses are defined for two-digit systems")
    single = _single_arrow_subgraph(g)
    reachable = lg.reachable_from(single, g.root)
    sub = LabeledDigraph(
        reachable,
        [e for e in single.edges if e[0] in reachable and e[1] in reachable],
        g.m,
    )
    info = lg.strongly_connected(sub)
    cycle_vertices = {
        v
        for cid, comp in enumerate(info.components)
        for v in comp
        if info.kinds[cid] != lg.COMP_TRIVIAL
    }
    if not cycle_vertices:
        return None

    # Shortest path from the root to any cycle vertex, lexicographic labels.
    dist: dict = {g.root: (0, ())}
    queue = deque([g.root])
    while queue:
        v = queue.popleft()
        d, word = dist[v]
        for label, w in sub.out[v]:
            if w not in dist:
                dist[w] = (d + 1, word + (label,))
                queue.append(w)

    best = None
    for v in sorted(cycle_vertices):
        if v not in dist:
            continue
        d, prefix = dist[v]
        cycle = _shortest_cycle(sub, v)
        if cycle is None:
            continue
        cand = (d + len(cycle), prefix + cycle, prefix, cycle)
        if best is None or (cand[0], cand[1]) < (best[0], best[1]):
            best = cand
    if best is None:
        return None
    _total, _word, prefix, cycle = best
    return make_address(prefix, cycle)


def _shortest_cycle(sub: LabeledDigraph, v: tuple):
    """Shortest lexicographically-least label word around a cycle through v."""
    dist: dict = {}
    queue = deque()
    for label, w in sorted(sub.out[v]):
        if w == v:
            return (label,)
        if w not in dist:
            dist[w] = (label,)
            queue.append(w)
    while queue:
        u = queue.popleft()
        word = dist[u]
        for label, w in sorted(sub.out[u]):
            if w == v:
                return word + (label,)
            if w not in dist:
                dist[w] = word + (label,)
                queue.append(w)
    return None


@dataclass(frozen=True)
class ObstructionReport:
    obstructed: bool
    vertex: tuple | None
    witness_address: Address | None
    all_vertices: tuple


def simple_connectedness_obstruction(g: NeighborGraph) -> ObstructionReport:
    """Detect the center-on-boundary obstruction for two-digit systems.

    The tile interior cannot be simply connected when the symmetry center
    lies on the boundary. The center's addresses are the label words of
    loop-free-label root paths; the search below looks for any such word that
    is simultaneously readable from a non-root vertex k, which certifies the
    center inside that boundary set. All certified vertices are reported.
    """
    if g.m != 2:
        raise ValueError("obstruction check is defined for two-digit systems")
    single = _single_arrow_subgraph(g)
    reachable = lg.reachable_from(single, g.root)
    sub = LabeledDigraph(
        reachable,
        [e for e in single.edges if e[0] in reachable and e[1] in reachable],
        g.m,
    )
    hits = []
    witnesses = {}
    for k in g.nonroot:
        witness = _product_lasso(sub, g, k)
        if witness is not None:
            hits.append(k)
            witnesses[k] = witness
    if not hits:
        return ObstructionReport(False, None, None, ())
    first = sorted(hits)[0]
    return ObstructionReport(True, first, witnesses[first], tuple(sorted(hits)))


def _product_lasso(sub: LabeledDigraph, g: NeighborGraph, start: tuple):
    """Label word of an infinite path shared by the loop-free root subgraph
    and the paths leaving `start`; None when no such word exists."""
    root = g.root
    init = (root, start)
    parents: dict = {init: None}
    order = [init]
    queue = deque([init])
    edges_out: dict = {}
    while queue:
        state = queue.popleft()
        u, w = state
        outs = []
        for label, u2 in sub.out[u]:
            for w2 in g.successors(w, label):
                if w2 == root:
                    continue
                nxt = (u2, w2)
                outs.append((label, nxt))
                if nxt not in parents:
                    parents[nxt] = (state, label)
                    order.append(nxt)
                    queue.append(nxt)
        edges_out[state] = outs

    # keep states with infinite continuations
    alive = set(parents)
    changed = True
    while changed:
        changed = False
        for state in list(alive):
            if not any(nxt in alive for _lab, nxt in edges_out.get(state, ())):
                alive.discard(state)
                changed = True
    if init not in alive:
        return None

    # walk greedily inside the alive set until a state repeats
    path_states = [init]
    labels: list[int] = []
    seen = {init: 0}
    state = init
    while True:
        label, nxt = min(
            (lab, n) for lab, n in edges_out[state] if n in alive
        )
        labels.append(label)
        if nxt in seen:
            cut = seen[nxt]
            return make_address(tuple(labels[:cut]), tuple(labels[cut:]))
        seen[nxt] = len(labels)
        path_states.append(nxt)
        state = nxt


def opposite_face_pairs(
    g2: IntersectionGraph, dims_by_subset: Mapping | None = None
) -> tuple:
    """Subsets of the form {k, -k} present in the pair graph."""
    out = []
    for key in g2.vertices:
        if len(key) == 2 and key[1] == vec_neg(key[0]):
            out.append(key)
        elif len(key) == 2 and key[0] == vec_neg(key[1]):
            out.append(key)
    return tuple(sorted(set(out)))


def subset_dimensions(ts: TileSystem, g2: IntersectionGraph) -> dict:
    """Modified dimension per subset, from the pair graph's own components."""
    info = lg.strongly_connected(g2.graph)
    lam_by_comp = [perron_root(g2.graph, comp) for comp in info.components]
    best = {}
    for cid in range(len(info.components)):
        lam = max(lam_by_comp[other] for other in info.comp_reach[cid])
        for v in info.components[cid]:
            best[v] = modified_dimension(ts, lam) if lam >= 1.0 else float("-inf")
    return best


@dataclass(frozen=True)
class CornerPoint:
    """A single point arising as an intersection of boundary sets."""

    address: Address
    subsets: tuple


@dataclass(frozen=True)
class PolyhedralReport:
    face_count: int
    edge_pairs: tuple  # 2-subsets with infinite intersection
    point_pairs: tuple  # (subset, addresses) with finitely many paths
    corner_points: tuple[CornerPoint, ...]
    opposite_pairs: tuple
    euler_characteristic: int


def polyhedral_report(
    ts: TileSystem,
    g: NeighborGraph,
    faces: Sequence[tuple],
    g2: IntersectionGraph,
    g3: IntersectionGraph | None,
) -> PolyhedralReport:
    """Assemble face/edge/vertex counts in the polyhedron sense.

    Edges are face pairs with infinitely many common points. Vertices are
    the distinct points of the finite pair and triple intersections; points
    are merged exactly when their addresses are equivalent, with the walk
    certificates implied by the equivalence test.
    """
    cards2 = g2.classify()
    edge_pairs = tuple(
        key for key in g2.vertices if cards2[key].is_infinite()
    )
    finite2 = finite_intersection_addresses(g2)
    point_candidates: list[tuple[Address, tuple]] = []
    point_pairs = []
    for key, addresses in sorted(finite2.items()):
        point_pairs.append((key, addresses))
        for a in addresses:
            point_candidates.append((a, key))
    if g3 is not None:
        finite3 = finite_intersection_addresses(g3)
        for key, addresses in sorted(finite3.items()):
            for a in addresses:
                point_candidates.append((a, key))

    corner_points = _merge_points(g, point_candidates)
    euler = len(faces) - len(edge_pairs) + len(corner_points)
    return PolyhedralReport(
        face_count=len(faces),
        edge_pairs=edge_pairs,
        point_pairs=tuple(point_pairs),
        corner_points=corner_points,
        opposite_pairs=opposite_face_pairs(g2),
        euler_characteristic=euler,
    )


def _merge_points(g: NeighborGraph, candidates: Sequence[tuple]) -> tuple[CornerPoint, ...]:
    from .addresses import addresses_equivalent

    groups: list[dict] = []
    for address, subset in candidates:
        placed = False
        for group in groups:
            rep = group["address"]
            if rep == address or addresses_equivalent(g, rep, address):
                group["subsets"].add(subset)
                placed = True
                break
        if not placed:
            groups.append({"address": address, "subsets": {subset}})
    return tuple(
        CornerPoint(group["address"], tuple(sorted(group["subsets"])))
        for group in groups
    )
