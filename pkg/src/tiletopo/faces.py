"""Deciding which boundary sets are faces.

Three routes are combined: a reachability sufficiency test, an exact test by
regular-language containment of infinite path languages, and a dimension
filter that rules out components whose boundary sets are too thin to cover an
open boundary patch. The containment engine doubles as a query interface for
covering questions between boundary-set languages.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .boundary import (
    SCCDecomposition,
    component_spectra,
    strong_components,
    vertex_dimensions,
)
from .exactmat import vec_neg
from .neighborgraph import NeighborGraph, check_tiling_existence
from .tilespec import TileSystem

DEFAULT_STATE_CAP = 2_000_000
DIMENSION_SLACK = 1e-9


def sufficient_face_test(g: NeighborGraph, vertex: tuple) -> bool:
    """Face for sure when the vertex reaches every other vertex up to sign."""
    if vertex == g.root or vertex not in g.out:
        raise ValueError(f"{vertex!r} is not a non-root vertex")
    reached = {vertex}
    frontier = [vertex]
    while frontier:
        v = frontier.pop()
        for _label, w in g.out[v]:
            if w != g.root and w not in reached:
                reached.add(w)
                frontier.append(w)
    for other in g.nonroot:
        if other not in reached and vec_neg(other) not in reached:
            return False
    return True


@dataclass(frozen=True)
class ContainmentResult:
    contained: bool | None  # None when the state cap was hit
    witness: tuple[int, ...] | None
    states_explored: int


def language_containment(
    g: NeighborGraph,
    source: tuple,
    targets: Iterable[tuple],
    *,
    state_cap: int = DEFAULT_STATE_CAP,
) -> ContainmentResult:
    """Decide whether every infinite path word from source is readable from
    some target vertex.

    Product search over (source-side vertex, subset of target-side vertices).
    Because the graph is pruned, every finite prefix extends to an infinite
    path, so reaching an empty target subset yields a finite witness word: a
    word readable from the source that no target can read. If no reachable
    state has an empty subset, containment holds for the infinite languages
    as well (the target-side run tree is finitely branching).

    The witness is the shortest such word, ties broken lexicographically.
    """
    graph = g.graph
    targets = tuple(t for t in targets if t != source)
    masks = graph.masks()
    start = (source, masks.mask_of(targets))
    if start[1] == 0:
        return ContainmentResult(False, (), 1)
    parents: dict = {start: None}
    queue: deque = deque([start])
    explored = 0
    while queue:
        state = queue.popleft()
        vertex, mask = state
        explored += 1
        if explored > state_cap:
            return ContainmentResult(None, None, explored)
        for label, nxt_vertex in graph.out[vertex]:
            nxt_mask = masks.step(mask, label)
            nxt = (nxt_vertex, nxt_mask)
            if nxt_mask == 0:
                word = [label]
                back = state
                while parents[back] is not None:
                    back, lab = parents[back]
                    word.append(lab)
                word.reverse()
                return ContainmentResult(False, tuple(word), explored)
            if nxt not in parents:
                parents[nxt] = (state, label)
                queue.append(nxt)
    return ContainmentResult(True, None, explored)


def exact_face_test(
    g: NeighborGraph,
    vertex: tuple,
    *,
    candidates: Sequence[tuple] | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> tuple[bool | None, tuple[int, ...] | None]:
    """Face iff some path word from the vertex avoids all other boundary sets.

    Valid when all neighbors are compatible (checked). `candidates` may
    restrict the covering side to a superset of the true faces; the boundary
    is covered by faces, so the verdict is unchanged while the search space
    shrinks. Returns (verdict, witness); verdict None means undecided at the
    state cap.
    """
    ok, _violations = check_tiling_existence(g)
    if not ok:
        raise ValueError("exact face test requires compatible neighbors")
    others = tuple(candidates) if candidates is not None else g.nonroot
    others = tuple(v for v in others if v != vertex)
    result = language_containment(g, vertex, others, state_cap=state_cap)
    if result.contained is None:
        return None, None
    return (not result.contained), result.witness


def dimension_face_filter(
    ts: TileSystem,
    g: NeighborGraph,
    scc: SCCDecomposition | None = None,
) -> frozenset:
    """Vertices excluded from facehood because their dimension value stays
    below n-1: such boundary sets cannot cover an open boundary patch."""
    if scc is None:
        scc = strong_components(g)
    spectra = component_spectra(ts, g, scc)
    dims = vertex_dimensions(scc, spectra, ts)
    threshold = ts.dimension - 1
    return frozenset(v for v, d in dims.items() if d < threshold - DIMENSION_SLACK)


@dataclass(frozen=True)
class FaceVerdict:
    sufficient: bool
    exact: bool | None
    dimension_value: float
    witness: tuple[int, ...] | None

    @property
    def is_face(self) -> bool | None:
        return self.exact


@dataclass(frozen=True)
class FaceReport:
    by_vertex: Mapping[tuple, FaceVerdict]

    def faces(self) -> tuple:
        return tuple(sorted(v for v, fv in self.by_vertex.items() if fv.exact))

    def undecided(self) -> tuple:
        return tuple(sorted(v for v, fv in self.by_vertex.items() if fv.exact is None))


def face_report(
    ts: TileSystem,
    g: NeighborGraph,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    restrict_targets: bool = False,
) -> FaceReport:
    """Run all three face methods over every non-root vertex.

    With restrict_targets, the exact test covers against the vertices that
    survive the dimension filter instead of all others; this is sound because
    the surviving set contains every true face.
    """
    scc = strong_components(g)
    spectra = component_spectra(ts, g, scc)
    dims = vertex_dimensions(scc, spectra, ts)
    threshold = ts.dimension - 1
    excluded = frozenset(v for v, d in dims.items() if d < threshold - DIMENSION_SLACK)
    candidates = tuple(v for v in g.nonroot if v not in excluded)

    verdicts = {}
    sufficient_cache = {}
    for comp in scc.components:
        # the sufficiency test is component-invariant; run it once per class
        sample = comp[0]
        flag = sufficient_face_test(g, sample)
        for v in comp:
            sufficient_cache[v] = flag

    for v in g.nonroot:
        if v in excluded:
            verdicts[v] = FaceVerdict(sufficient_cache[v], False, dims[v], None)
            continue
        targets = candidates if restrict_targets else None
        exact, witness = exact_face_test(
            g, v, candidates=targets, state_cap=state_cap
        )
        verdicts[v] = FaceVerdict(sufficient_cache[v], exact, dims[v], witness)
    return FaceReport(by_vertex=verdicts)
