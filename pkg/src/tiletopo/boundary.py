"""Boundary-set classification over the neighbor graph.

Assigns each neighbor a cardinality class (singleton, finite, countably
infinite, uncountable), decomposes the non-root graph into strong components
ordered by reachability, and attaches spectral radii of component adjacency
matrices together with the derived dimension values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import labeledgraph as lg
from .exactmat import charpoly
from .labeledgraph import Cardinality, LabeledDigraph, SccInfo
from .neighborgraph import NeighborGraph
from .tilespec import TileSystem, format_vector, system_spectrum

POWER_RESIDUAL = 1e-12
POWER_MAX_ITER = 1_000_000
EXACT_CROSSCHECK_SIZE = 12


@dataclass(frozen=True)
class SCCDecomposition:
    """Strong components of the non-root graph plus their partial order."""

    components: tuple[tuple, ...]
    comp_of: Mapping[tuple, int]
    kinds: tuple[str, ...]
    dag_edges: tuple[tuple[int, int], ...]
    comp_reach: tuple[frozenset, ...]

    def precedes(self, upper: int, lower: int) -> bool:
        """upper can reach lower (reflexively)."""
        return lower in self.comp_reach[upper]


def strong_components(g: NeighborGraph) -> SCCDecomposition:
    info = lg.strongly_connected(g.graph)
    return SCCDecomposition(
        components=info.components,
        comp_of=info.comp_of,
        kinds=info.kinds,
        dag_edges=info.dag_edges,
        comp_reach=info.comp_reach,
    )


def reachability_by_matrix(g: LabeledDigraph) -> dict:
    """Vertex reachability from capped powers of the adjacency matrix.

    Independent of the graph-search route; used to cross-check the partial
    order. Entry (u, v) is reachable iff some power H^t (t = 1..q) is positive.
    """
    q = len(g.vertices)
    if q == 0:
        return {}
    h = np.zeros((q, q), dtype=bool)
    for u, v, _label in g.edges:
        h[g.index[u], g.index[v]] = True
    acc = h.copy()
    power = h.copy()
    for _ in range(q - 1):
        power = power @ h
        acc |= power
    return {
        (u, v): bool(acc[g.index[u], g.index[v]])
        for u in g.vertices
        for v in g.vertices
    }


@dataclass(frozen=True)
class BoundaryClassification:
    cardinality: Mapping[tuple, Cardinality]
    scc_of: Mapping[tuple, int]
    decomposition: SCCDecomposition

    def count(self, kind: str) -> int:
        return sum(1 for c in self.cardinality.values() if c.kind == kind)

    def vertices_of_kind(self, kind: str) -> tuple:
        return tuple(sorted(v for v, c in self.cardinality.items() if c.kind == kind))


def classify_cardinality(g: NeighborGraph) -> BoundaryClassification:
    scc = strong_components(g)
    cards = lg.classify_path_cardinality(g.graph)
    return BoundaryClassification(cardinality=cards, scc_of=dict(scc.comp_of), decomposition=scc)


def singleton_address(g: NeighborGraph, vertex: tuple):
    """Canonical address of the single point of a singleton boundary set."""
    from .addresses import make_address

    pre, per = lg.unique_path_labels(g.graph, vertex)
    return make_address(pre, per)


def point_neighbor_matrix_test(g: NeighborGraph) -> frozenset:
    """Vertices whose row sums stay 1 across the first q adjacency powers.

    Exact integer iteration of r <- H r from the all-ones vector; a vertex
    passes when its entry is 1 at every step. Pinpoints the same vertices as
    the unique-path criterion and is kept as an independent check.
    """
    graph = g.graph
    verts = graph.vertices
    q = len(verts)
    counts = {v: 1 for v in verts}
    passing = set(verts)
    for _ in range(q):
        nxt = {v: 0 for v in verts}
        for u, v, _label in graph.edges:
            nxt[u] += counts[v]
        counts = nxt
        passing = {v for v in passing if counts[v] == 1}
    return frozenset(passing)


@dataclass(frozen=True)
class BoundaryEquation:
    """The subdivision equation of one boundary set, as (word, target) terms."""

    vertex: tuple
    terms: tuple[tuple[tuple[int, ...], tuple], ...]

    def text(self) -> str:
        parts = [
            f"f_{''.join(str(s) for s in word)}(B_{format_vector(v)})"
            for word, v in self.terms
        ]
        return f"B_{format_vector(self.vertex)} = " + " ∪ ".join(parts)


def boundary_equations(g: NeighborGraph, vertex: tuple) -> BoundaryEquation:
    """One-step equation B_k = union of f_i(B_k') over the outgoing edges."""
    if vertex == g.root or vertex not in g.out:
        raise ValueError(f"{vertex!r} is not a non-root vertex")
    terms = tuple(((label,), target) for label, target in g.out[vertex])
    return BoundaryEquation(vertex, terms)


def substituted_equations(
    g: NeighborGraph, keep: Sequence[tuple], max_terms: int = 4096
) -> dict:
    """Equations over the kept vertices only, expanding all others.

    Targets outside keep (and outside its negations) are replaced by their
    own equations until only kept vertices remain. Raises if the expansion
    cycles through a non-kept vertex.
    """
    kept = set(keep)
    allowed = kept | {tuple(-x for x in v) for v in kept}
    result = {}
    for v in kept:
        terms = list(boundary_equations(g, v).terms)
        progress = True
        while progress:
            progress = False
            nxt = []
            for word, target in terms:
                if target in allowed:
                    nxt.append((word, target))
                    continue
                if len(nxt) + len(terms) > max_terms:
                    raise ValueError("equation expansion does not close over the kept set")
                for label, t2 in g.out[target]:
                    nxt.append((word + (label,), t2))
                progress = True
            terms = nxt
            if any(len(word) > max_terms for word, _ in terms):
                raise ValueError("equation expansion does not terminate")
        result[v] = BoundaryEquation(v, tuple(sorted(terms)))
    return result


class PerronConvergenceError(RuntimeError):
    def __init__(self, iterations: int):
        super().__init__(f"power iteration did not reach residual {POWER_RESIDUAL} in {iterations} steps")
        self.iterations = iterations


def perron_root(g: LabeledDigraph, component: Sequence[tuple]) -> float:
    """Largest eigenvalue of the component's adjacency matrix.

    Plain cycles get the exact closed form (product of multiplicities to the
    power 1/length). Aperiodic components use power iteration to 1e-12
    residual, cross-checked for sizes up to 12 against the exact
    characteristic polynomial via bisection. Periodic non-cycle components
    use the exact polynomial route directly.
    """
    comp = tuple(component)
    if len(comp) == 1:
        loops = sum(1 for lab, w in g.out[comp[0]] if w == comp[0])
        return float(loops)

    walk = lg.cycle_structure(g, comp)
    if walk is not None:
        product = 1
        for _u, _v, mult in walk:
            product *= mult
        return float(product) ** (1.0 / len(walk))

    h, _ = lg.adjacency_counts(g, comp)
    period = lg.component_period(g, comp)
    if period > 1:
        lam = _perron_exact(h)
        if lam is None:
            arr = np.array(h, dtype=float)
            return float(max(abs(np.linalg.eigvals(arr))))
        return lam

    lam = _perron_power(h)
    if len(comp) <= EXACT_CROSSCHECK_SIZE:
        exact = _perron_exact(h)
        if exact is not None and abs(exact - lam) > 1e-9 * max(1.0, exact):
            raise AssertionError(
                f"power iteration ({lam}) disagrees with exact root ({exact})"
            )
    return lam


def _perron_power(h: list[list[int]]) -> float:
    arr = np.array(h, dtype=float)
    size = arr.shape[0]
    vec = np.ones(size)
    lam = 1.0
    for iteration in range(POWER_MAX_ITER):
        nxt = arr @ vec
        norm = float(np.max(nxt))
        if norm == 0.0:
            return 0.0
        nxt /= norm
        lam = norm
        if float(np.max(np.abs(arr @ nxt - lam * nxt))) <= POWER_RESIDUAL * max(1.0, lam):
            return lam
        vec = nxt
    raise PerronConvergenceError(POWER_MAX_ITER)


def _perron_exact(h: list[list[int]]) -> float | None:
    """Largest real root of the exact characteristic polynomial, by bisection.

    The spectral radius of an irreducible nonnegative matrix is a simple root
    of the monic integer polynomial, so the sign changes across it. A float
    eigenvalue estimate seeds the bracket; the bisection itself runs in
    exact rational arithmetic.
    """
    if len(h) > 40:
        return None
    coeffs = charpoly(tuple(tuple(row) for row in h))

    def value(x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in coeffs:
            acc = acc * x + c
        return acc

    eigs = np.linalg.eigvals(np.array(h, dtype=float))
    seed = Fraction(float(max(abs(eigs)))).limit_denominator(10**12)
    delta = Fraction(1, 1 << 20)
    lo = hi = None
    while delta < 2:
        if value(seed - delta) < 0 and value(seed + delta) > 0:
            lo, hi = seed - delta, seed + delta
            break
        delta *= 2
    if lo is None:
        return None
    eps = Fraction(1, 10**14)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if value(mid) < 0:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


@dataclass(frozen=True)
class ComponentSpectrum:
    component_id: int
    size: int
    kind: str
    perron: float
    modified_dimension: float


def component_spectra(ts: TileSystem, g: NeighborGraph, scc: SCCDecomposition) -> tuple[ComponentSpectrum, ...]:
    out = []
    for cid, comp in enumerate(scc.components):
        lam = perron_root(g.graph, comp)
        dim = modified_dimension(ts, lam) if lam >= 1.0 else float("-inf")
        out.append(ComponentSpectrum(cid, len(comp), scc.kinds[cid], lam, dim))
    return tuple(out)


def vertex_dimensions(
    scc: SCCDecomposition, spectra: Sequence[ComponentSpectrum], ts: TileSystem
) -> dict:
    """Dimension value per vertex: driven by the largest spectral radius among
    reachable components (a singleton class inherits from its successors)."""
    best_by_comp = []
    for cid in range(len(scc.components)):
        lam = max(spectra[other].perron for other in scc.comp_reach[cid])
        best_by_comp.append(lam)
    dims = {}
    for cid, comp in enumerate(scc.components):
        lam = best_by_comp[cid]
        value = modified_dimension(ts, lam) if lam >= 1.0 else float("-inf")
        for v in comp:
            dims[v] = value
    return dims


def modified_dimension(ts: TileSystem, lam: float) -> float:
    """Dimension in the conjugacy-invariant metric: n log(lam) / log(m)."""
    if lam <= 0:
        return float("-inf")
    return ts.dimension * math.log(lam) / math.log(ts.m)


def hausdorff_dimension_selfsimilar(ts: TileSystem, lam: float) -> float | None:
    """log(lam)/log(R) with R = m^(1/n); only defined when the expansion is
    conjugate to a similarity, otherwise None."""
    report = system_spectrum(ts)
    if not report.is_selfsimilar_conjugate:
        return None
    if lam <= 0:
        return float("-inf")
    ratio = ts.m ** (1.0 / ts.dimension)
    return math.log(lam) / math.log(ratio)
