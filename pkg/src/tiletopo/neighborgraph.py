"""Neighbor graph of a tile system.

Vertices are the lattice translations k with T and T + k intersecting; a
directed edge (k, k', i) records k' = M k + k_j - k_i for some digit index j.
Construction runs the breadth-first recursion from the root differences
inside a bounding window and then strips vertices without successors until
every surviving vertex carries an infinite path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactmat import frac_mat_mul, frac_mat_vec, frac_matrix, mat_vec, vec_neg, vec_sub
from .labeledgraph import LabeledDigraph
from .tilespec import TileSystem, format_vector, inverse_matrix_fractions

DEFAULT_MAX_VERTICES = 100_000


class CapExceededError(RuntimeError):
    """A configured search cap was hit; results would be partial."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded cap {cap}")
        self.what = what
        self.cap = cap


@dataclass(frozen=True)
class BoundsBox:
    """Per-coordinate bounds for the attractor, sampled or certified."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    method: str  # "sampled" | "rigorous"
    seed: int | None = None

    def inflated(self, factor: float) -> "BoundsBox":
        lo, hi = [], []
        for a, b in zip(self.lower, self.upper):
            center = (a + b) / 2.0
            half = (b - a) / 2.0 * factor
            lo.append(center - half)
            hi.append(center + half)
        return BoundsBox(tuple(lo), tuple(hi), self.method, self.seed)


def attractor_bounds(
    ts: TileSystem,
    method: str = "rigorous",
    *,
    points: int = 100_000,
    seed: int = 0,
    depth: int = 60,
    max_halving_power: int = 256,
) -> BoundsBox:
    """Coordinate bounds for the attractor T.

    "sampled" runs a seeded chaos game, takes extrema and inflates the box by
    25 percent. "rigorous" sums exact coordinate extrema of M^-t k over the
    digits to the given depth and closes with a geometric tail bound obtained
    from a power p with ||M^-p||_inf <= 1/2.
    """
    if method == "sampled":
        from .render import chaos_points

        cloud = chaos_points(ts, points, seed)
        lo = cloud.points.min(axis=0)
        hi = cloud.points.max(axis=0)
        box = BoundsBox(tuple(map(float, lo)), tuple(map(float, hi)), "sampled", seed)
        return box.inflated(1.5)  # +25% of the width on each side
    if method != "rigorous":
        raise ValueError(f"unknown bounds method {method!r}")

    n = ts.dimension
    inv = inverse_matrix_fractions(ts)

    # Locate p with ||M^-p||_inf <= 1/2 (exists because M is expanding).
    power = inv
    p = 1
    while max(sum(abs(x) for x in row) for row in power) > Fraction(1, 2):
        power = frac_mat_mul(power, inv)
        p += 1
        if p > max_halving_power:
            raise CapExceededError("tail bound halving power", max_halving_power)

    digits = [tuple(Fraction(x) for x in d) for d in ts.digits]
    lo = [Fraction(0)] * n
    hi = [Fraction(0)] * n
    tail = Fraction(0)
    current = inv
    for t in range(1, depth + p + 1):
        images = [frac_mat_vec(current, d) for d in digits]
        if t <= depth:
            for q in range(n):
                lo[q] += min(img[q] for img in images)
                hi[q] += max(img[q] for img in images)
        else:
            tail += max(max(abs(x) for x in img) for img in images)
        current = frac_mat_mul(current, inv)
    tail *= 2

    lower = tuple(float(x - tail) - 1e-9 for x in lo)
    upper = tuple(float(x + tail) + 1e-9 for x in hi)
    return BoundsBox(lower, upper, "rigorous", None)


class NeighborGraph:
    """Finished neighbor graph; treat as immutable after construction.

    The root 0 belongs to the vertex set. Its loops (0, 0, i) are implicit
    and never stored. `graph` exposes the same edges as a LabeledDigraph for
    the analysis passes that work over the non-root part.
    """

    def __init__(self, system: TileSystem, vertices: Iterable[tuple], edges: Iterable[tuple]):
        self.system = system
        self.root = tuple(0 for _ in range(system.dimension))
        nonroot = sorted(set(vertices) - {self.root})
        self.vertices: tuple = (self.root, *nonroot)
        self.nonroot: tuple = tuple(nonroot)
        self.edges: tuple = tuple(sorted(set(edges)))
        self.m = system.m
        out: dict = {v: [] for v in self.vertices}
        incoming_labels: dict = {v: set() for v in self.vertices}
        for u, v, label in self.edges:
            out[u].append((label, v))
            incoming_labels[v].add(label)
        self.out: dict = {v: tuple(sorted(lst)) for v, lst in out.items()}
        self.incoming_labels: dict = {v: frozenset(s) for v, s in incoming_labels.items()}
        self._digit_index = {d: i + 1 for i, d in enumerate(system.digits)}
        self._graph: LabeledDigraph | None = None
        self._full: LabeledDigraph | None = None

    @property
    def graph(self) -> LabeledDigraph:
        """Non-root subgraph used for boundary-set analysis."""
        if self._graph is None:
            edges = [(u, v, lab) for u, v, lab in self.edges if u != self.root and v != self.root]
            self._graph = LabeledDigraph(self.nonroot, edges, self.m)
        return self._graph

    @property
    def full_graph(self) -> LabeledDigraph:
        """All vertices including the root; root loops stay implicit."""
        if self._full is None:
            self._full = LabeledDigraph(self.vertices, self.edges, self.m)
        return self._full

    def successors(self, v: tuple, label: int) -> tuple:
        return tuple(t for lab, t in self.out[v] if lab == label)

    def edge_second_label(self, edge: tuple) -> int:
        """Digit index j with k' = M k + k_j - k_i for the edge (k, k', i)."""
        u, v, label = edge
        mk = mat_vec(self.system.matrix, u)
        kj = tuple(vi - mi + ki for vi, mi, ki in zip(v, mk, self.system.digit(label)))
        j = self._digit_index.get(kj)
        if j is None:
            raise ValueError(f"edge {edge!r} is not consistent with the digit set")
        return j

    def is_double_edge(self, edge: tuple) -> bool:
        """True when the edge arises from equal digit indices (k' = M k)."""
        u, v, label = edge
        return v == tuple(mat_vec(self.system.matrix, u))

    def __contains__(self, vertex) -> bool:
        return vertex in self.out


def build_neighbor_graph(
    ts: TileSystem,
    bounds: BoundsBox,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
) -> NeighborGraph:
    """Construct the pruned neighbor graph inside the bounding window.

    A translation k is admissible when the box of T and the box of T + k
    overlap in every coordinate. The search is breadth first in sorted order,
    so results are deterministic for identical inputs.
    """
    n = ts.dimension
    root = tuple(0 for _ in range(n))
    span = [hi - lo for lo, hi in zip(bounds.lower, bounds.upper)]
    slack = [1e-9 * max(1.0, s) for s in span]

    def admissible(k: tuple) -> bool:
        return all(
            (k[q] + bounds.lower[q] <= bounds.upper[q] + slack[q])
            and (k[q] + bounds.upper[q] >= bounds.lower[q] - slack[q])
            for q in range(n)
        )

    digits = ts.digits
    matrix = ts.matrix
    m = ts.m

    edges: list[tuple] = []
    seeds = sorted(
        {
            vec_sub(digits[j], digits[i])
            for i in range(m)
            for j in range(m)
            if i != j
        }
    )
    visited: set = {root}
    queue: deque = deque()
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            d = vec_sub(digits[j], digits[i])
            if admissible(d):
                edges.append((root, d, i + 1))
                if d not in visited:
                    visited.add(d)
                    queue.append(d)
    del seeds

    while queue:
        k = queue.popleft()
        mk = mat_vec(matrix, k)
        for i in range(m):
            for j in range(m):
                k2 = tuple(a + b - c for a, b, c in zip(mk, digits[j], digits[i]))
                if not admissible(k2):
                    continue
                edges.append((k, k2, i + 1))
                if k2 not in visited:
                    if len(visited) > max_vertices:
                        raise CapExceededError("neighbor graph vertices", max_vertices)
                    visited.add(k2)
                    queue.append(k2)

    # Remove vertices without successors until stable; the root never goes
    # (its implicit loops keep it alive).
    alive = set(visited)
    out_count: dict = {v: 0 for v in alive}
    in_edges: dict = {v: [] for v in alive}
    out_edges: dict = {v: [] for v in alive}
    for idx, (u, v, _label) in enumerate(edges):
        out_count[u] += 1
        in_edges[v].append(idx)
        out_edges[u].append(idx)
    edge_alive = [True] * len(edges)
    dead = deque(v for v in alive if v != root and out_count[v] == 0)
    while dead:
        v = dead.popleft()
        if v not in alive:
            continue
        alive.remove(v)
        for idx in in_edges[v]:
            if not edge_alive[idx]:
                continue
            edge_alive[idx] = False
            u = edges[idx][0]
            if u in alive:
                out_count[u] -= 1
                if u != root and out_count[u] == 0:
                    dead.append(u)
        for idx in out_edges[v]:
            edge_alive[idx] = False

    kept_edges = [e for i, e in enumerate(edges) if edge_alive[i] and e[0] in alive and e[1] in alive]
    graph = NeighborGraph(ts, alive, kept_edges)
    _check_invariants(graph)
    return graph


def _check_invariants(g: NeighborGraph) -> None:
    present = set(g.vertices)
    for v in g.nonroot:
        if vec_neg(v) not in present:
            raise AssertionError(f"vertex set not closed under negation at {v!r}")
        if not g.out[v]:
            raise AssertionError(f"pruned vertex {v!r} kept without successors")
    reached = {g.root}
    frontier = [g.root]
    while frontier:
        v = frontier.pop()
        for _label, w in g.out[v]:
            if w not in reached:
                reached.add(w)
                frontier.append(w)
    missing = present - reached
    if missing:
        raise AssertionError(f"vertices unreachable from the root: {sorted(missing)[:4]}")


def opposite_edge(g: NeighborGraph, edge: tuple) -> tuple:
    """Mirror edge under negation: (k, k', i) maps to (-k, -k', j)."""
    if edge not in set(g.edges):
        raise ValueError(f"edge {edge!r} not in graph")
    u, v, _label = edge
    j = g.edge_second_label(edge)
    return (vec_neg(u), vec_neg(v), j)


def check_tiling_existence(g: NeighborGraph) -> tuple[bool, tuple[tuple, ...]]:
    """Every non-root vertex must receive every label on some incoming edge.

    Returns (ok, violations) where violations lists (vertex, label) pairs.
    """
    wanted = set(range(1, g.m + 1))
    violations = []
    for v in g.nonroot:
        for label in sorted(wanted - g.incoming_labels[v]):
            violations.append((v, label))
    return (not violations, tuple(violations))


def check_osc_flag(g: NeighborGraph) -> bool:
    """True when the root has no incoming edge besides its implicit loops."""
    return all(v != g.root for _u, v, _label in g.edges)


def piece_relation(g: NeighborGraph, p: Sequence[int], q: Sequence[int]):
    """Translation vector v with f_p^-1 f_q = x + v, if the pieces meet.

    Words use symbols 1..m and must have equal length. Returns the vector
    when it is the root or a graph vertex (the pieces T_p and T_q coincide
    or intersect), otherwise None.
    """
    if len(p) != len(q):
        raise ValueError("piece words must have equal length")
    ts = g.system
    v = tuple(0 for _ in range(ts.dimension))
    for a, b in zip(p, q):
        mv = mat_vec(ts.matrix, v)
        v = tuple(x + y - z for x, y, z in zip(mv, ts.digit(b), ts.digit(a)))
    if v == g.root or v in g.out:
        return v
    return None


def reduced_representative(v: tuple) -> tuple:
    """Canonical member of the pair {v, -v}: the lexicographically larger."""
    return max(v, vec_neg(v))


def to_dot(g: NeighborGraph, reduced: bool = False) -> str:
    """Graphviz source. Reduced form merges each vertex with its negation.

    Reduced edges are drawn from the representative side with attribute
    opp=true when the true target is the negation of the drawn target.
    """
    lines = ["digraph neighbors {"]
    name = {}

    def node(v: tuple) -> str:
        if v not in name:
            name[v] = f'"k={format_vector(v)}"'
        return name[v]

    if not reduced:
        for v in g.vertices:
            lines.append(f"  {node(v)};")
        for u, v, label in g.edges:
            lines.append(f"  {node(u)} -> {node(v)} [label={label}];")
    else:
        reps = [g.root] + sorted({reduced_representative(v) for v in g.nonroot})
        for v in reps:
            lines.append(f"  {node(v)};")
        for u, v, label in g.edges:
            if u != g.root and reduced_representative(u) != u:
                continue
            target = reduced_representative(v) if v != g.root else v
            opp = " opp=true" if target != v else ""
            lines.append(f"  {node(u)} -> {node(target)} [label={label}{opp}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
