"""Directed multigraphs with edge labels, plus path and component analysis.

This is the shared engine behind the neighbor graph and the intersection
graphs: strongly connected components, reachability, and the cardinality
classification of the point sets addressed by infinite label paths.

Graphs handed to the classification routines are assumed pruned: every
vertex has at least one outgoing edge, so every vertex carries an infinite
path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

Vertex = Hashable
Edge = tuple  # (source, target, label)

SINGLETON = "singleton"
FINITE = "finite"
COUNTABLY_INFINITE = "countably_infinite"
UNCOUNTABLE = "uncountable"

COMP_TRIVIAL = "trivial"  # one vertex, no loop
COMP_CYCLE = "cycle"  # one structural out-edge per vertex
COMP_BRANCHING = "branching"  # more edges than vertices: two cycles meet


class LabeledDigraph:
    """Immutable-by-convention multigraph with labels 1..m."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge], m: int):
        self.vertices: tuple = tuple(sorted(set(vertices), key=_sort_key))
        self.m = m
        vertex_set = set(self.vertices)
        cleaned = []
        for u, v, label in edges:
            if u in vertex_set and v in vertex_set:
                cleaned.append((u, v, int(label)))
        self.edges: tuple = tuple(sorted(set(cleaned), key=_edge_key))
        self.index: dict = {v: i for i, v in enumerate(self.vertices)}
        out: dict = {v: [] for v in self.vertices}
        for u, v, label in self.edges:
            out[u].append((label, v))
        self.out: dict = {v: tuple(sorted(lst)) for v, lst in out.items()}
        self._succ_cache: dict = {}

    def successors(self, v: Vertex, label: int) -> tuple:
        key = (v, label)
        hit = self._succ_cache.get(key)
        if hit is None:
            hit = tuple(t for lab, t in self.out[v] if lab == label)
            self._succ_cache[key] = hit
        return hit

    def out_degree(self, v: Vertex) -> int:
        return len(self.out[v])

    def __len__(self) -> int:
        return len(self.vertices)

    # Bitmask machinery for subset walks. Masks index self.vertices.
    def masks(self) -> "_MaskOps":
        return _MaskOps(self)


def _sort_key(v):
    return (repr(type(v)), repr(v)) if not isinstance(v, tuple) else ("t", v)


def _edge_key(e):
    u, v, label = e
    return (_sort_key(u), label, _sort_key(v))


class _MaskOps:
    """Subset-of-vertices arithmetic over Python ints."""

    def __init__(self, g: LabeledDigraph):
        self.g = g
        self.full = (1 << len(g.vertices)) - 1
        self.bit = {v: 1 << i for v, i in g.index.items()}
        succ_bits: list[list[int]] = [[0] * len(g.vertices) for _ in range(g.m + 1)]
        for u, v, label in g.edges:
            succ_bits[label][g.index[u]] |= self.bit[v]
        self.succ_bits = succ_bits
        self._step_cache: dict = {}

    def mask_of(self, vertices: Iterable[Vertex]) -> int:
        mask = 0
        for v in vertices:
            mask |= self.bit[v]
        return mask

    def step(self, mask: int, label: int) -> int:
        key = (mask, label)
        hit = self._step_cache.get(key)
        if hit is not None:
            return hit
        result = 0
        rows = self.succ_bits[label]
        remaining = mask
        while remaining:
            low = remaining & -remaining
            result |= rows[low.bit_length() - 1]
            remaining ^= low
        self._step_cache[key] = result
        return result

    def vertices_of(self, mask: int) -> tuple:
        verts = []
        while mask:
            low = mask & -mask
            verts.append(self.g.vertices[low.bit_length() - 1])
            mask ^= low
        return tuple(verts)


@dataclass(frozen=True)
class SccInfo:
    """Strong components with reachability order.

    components are topologically sorted (sources first); comp_reach[i] is the
    set of component ids reachable from component i, including i itself.
    """

    components: tuple[tuple, ...]
    comp_of: Mapping[Vertex, int]
    kinds: tuple[str, ...]
    internal_edges: tuple[int, ...]
    dag_edges: tuple[tuple[int, int], ...]
    comp_reach: tuple[frozenset, ...]

    def reaches(self, a: int, b: int) -> bool:
        return b in self.comp_reach[a]


def strongly_connected(g: LabeledDigraph) -> SccInfo:
    """Tarjan SCC (iterative) with per-component structure classification."""
    index_counter = 0
    stack: list = []
    lowlink: dict = {}
    order: dict = {}
    on_stack: set = set()
    comps: list[list] = []

    for root in g.vertices:
        if root in order:
            continue
        work = [(root, iter(g.out[root]))]
        order[root] = lowlink[root] = index_counter
        index_counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for _label, w in it:
                if w not in order:
                    order[w] = lowlink[w] = index_counter
                    index_counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.out[w])))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], order[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == order[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.remove(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)

    # Tarjan emits components in reverse topological order.
    comps.reverse()
    components = tuple(tuple(sorted(c, key=_sort_key)) for c in comps)
    comp_of = {v: i for i, c in enumerate(components) for v in c}

    internal = [0] * len(components)
    dag: set[tuple[int, int]] = set()
    for u, v, _label in g.edges:
        cu, cv = comp_of[u], comp_of[v]
        if cu == cv:
            internal[cu] += 1
        else:
            dag.add((cu, cv))

    kinds = []
    for i, comp in enumerate(components):
        if internal[i] == 0:
            kinds.append(COMP_TRIVIAL)
        elif internal[i] == len(comp):
            kinds.append(COMP_CYCLE)
        else:
            kinds.append(COMP_BRANCHING)

    reach: list[frozenset] = [frozenset()] * len(components)
    for i in range(len(components) - 1, -1, -1):
        acc = {i}
        for a, b in dag:
            if a == i:
                acc |= reach[b]
        reach[i] = frozenset(acc)

    return SccInfo(
        components=components,
        comp_of=comp_of,
        kinds=tuple(kinds),
        internal_edges=tuple(internal),
        dag_edges=tuple(sorted(dag)),
        comp_reach=tuple(reach),
    )


def reachable_from(g: LabeledDigraph, start: Vertex) -> set:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for _label, w in g.out[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


@dataclass(frozen=True)
class Cardinality:
    kind: str
    path_count: int | None = None  # set for singleton/finite kinds

    def is_infinite(self) -> bool:
        return self.kind in (COUNTABLY_INFINITE, UNCOUNTABLE)


def classify_path_cardinality(g: LabeledDigraph, scc: SccInfo | None = None) -> dict:
    """Per-vertex count class of the infinite label paths leaving the vertex.

    Requires a pruned graph. A vertex is uncountable when it reaches a
    branching component; countably infinite when it reaches a cycle component
    that can be left again; otherwise the finitely many paths are counted
    exactly (1 means a unique path).
    """
    if scc is None:
        scc = strongly_connected(g)

    branching = {i for i, k in enumerate(scc.kinds) if k == COMP_BRANCHING}
    cycle_ids = {i for i, k in enumerate(scc.kinds) if k == COMP_CYCLE}
    leaky_cycles = set()
    for cid in cycle_ids:
        members = set(scc.components[cid])
        for v in members:
            if any(w not in members for _label, w in g.out[v]):
                leaky_cycles.add(cid)
                break

    result: dict = {}
    path_count_memo: dict = {}

    def finite_paths(v) -> int:
        if v in path_count_memo:
            return path_count_memo[v]
        cid = scc.comp_of[v]
        if scc.kinds[cid] == COMP_CYCLE:
            count = 1
        else:
            count = sum(finite_paths(w) for _label, w in g.out[v])
        path_count_memo[v] = count
        return count

    for v in g.vertices:
        cid = scc.comp_of[v]
        reach = scc.comp_reach[cid]
        if reach & branching:
            result[v] = Cardinality(UNCOUNTABLE)
        elif reach & leaky_cycles:
            result[v] = Cardinality(COUNTABLY_INFINITE)
        else:
            count = finite_paths(v)
            kind = SINGLETON if count == 1 else FINITE
            result[v] = Cardinality(kind, path_count=count)
    return result


def unique_path_labels(g: LabeledDigraph, start: Vertex) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Preperiod and period of the single infinite path from a singleton vertex."""
    labels: list[int] = []
    seen_at: dict = {}
    v = start
    while v not in seen_at:
        seen_at[v] = len(labels)
        out = g.out[v]
        if len(out) != 1:
            raise ValueError(f"vertex {v!r} does not carry a unique path")
        label, w = out[0]
        labels.append(label)
        v = w
    cut = seen_at[v]
    return tuple(labels[:cut]), tuple(labels[cut:])


def finite_path_labels(g: LabeledDigraph, start: Vertex, limit: int = 64) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All infinite paths from a finite-class vertex, as (preperiod, period) pairs.

    Enumerates the finitely many branchings through trivial components and
    then follows each entered cycle deterministically.
    """
    scc = strongly_connected(g)
    results: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def walk(v, prefix: list[int]):
        if len(results) > limit:
            raise ValueError("path enumeration exceeded limit; vertex is not finite-class")
        cid = scc.comp_of[v]
        if scc.kinds[cid] == COMP_CYCLE:
            pre, per = unique_path_labels(g, v)
            assert not pre
            results.append((tuple(prefix), per))
            return
        for label, w in g.out[v]:
            walk(w, prefix + [label])

    walk(start, [])
    return results


def adjacency_counts(g: LabeledDigraph, vertices: Sequence[Vertex] | None = None) -> tuple[list[list[int]], tuple]:
    """Integer adjacency matrix (edge multiplicities) over the given vertices."""
    verts = tuple(vertices) if vertices is not None else g.vertices
    pos = {v: i for i, v in enumerate(verts)}
    h = [[0] * len(verts) for _ in verts]
    for u, v, _label in g.edges:
        if u in pos and v in pos:
            h[pos[u]][pos[v]] += 1
    return h, verts


def labeled_adjacency_counts(g: LabeledDigraph, label: int, vertices: Sequence[Vertex] | None = None) -> tuple[list[list[int]], tuple]:
    """Adjacency matrix restricted to edges with one label."""
    verts = tuple(vertices) if vertices is not None else g.vertices
    pos = {v: i for i, v in enumerate(verts)}
    h = [[0] * len(verts) for _ in verts]
    for u, v, lab in g.edges:
        if lab == label and u in pos and v in pos:
            h[pos[u]][pos[v]] += 1
    return h, verts


def cycle_structure(g: LabeledDigraph, component: Sequence[Vertex]) -> list[tuple[Vertex, Vertex, int]] | None:
    """If the component is a structural cycle, return it as (u, v, multiplicity) steps.

    Returns None when the component is not a plain cycle. Multiplicity counts
    parallel edges (differing labels) along each step.
    """
    members = set(component)
    step: dict = {}
    mult: dict = {}
    for u, v, _label in g.edges:
        if u in members and v in members:
            if u in step and step[u] != v:
                return None
            step[u] = v
            mult[(u, v)] = mult.get((u, v), 0) + 1
    if set(step) != members:
        return None
    start = component[0]
    walk = []
    v = start
    for _ in range(len(members)):
        w = step[v]
        walk.append((v, w, mult[(v, w)]))
        v = w
    if v != start:
        return None
    return walk


def component_period(g: LabeledDigraph, component: Sequence[Vertex]) -> int:
    """gcd of cycle lengths inside a strongly connected component."""
    import math

    members = set(component)
    start = component[0]
    level = {start: 0}
    queue = [start]
    period = 0
    while queue:
        v = queue.pop(0)
        for _label, w in g.out[v]:
            if w not in members:
                continue
            if w not in level:
                level[w] = level[v] + 1
                queue.append(w)
            else:
                period = math.gcd(period, level[v] + 1 - level[w])
    return abs(period) if period else 1
