"""Point clouds for attractors and boundary sets, with CSV and figure output."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactmat import solve_exact
from .neighborgraph import NeighborGraph
from .tilespec import TileSystem, inverse_matrix_fractions

CHAOS_BURN_IN = 100


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # shape (count, dimension)
    source: str  # "chaos" | "subdivision" | "boundary(<vertex>)"
    seed: int | None = None


def chaos_points(ts: TileSystem, count: int, seed: int) -> PointCloud:
    """Seeded chaos-game sample of the attractor.

    Iterates x <- M^-1 (x + k_j) with digits drawn uniformly; the first
    CHAOS_BURN_IN iterates are discarded so the orbit settles onto the
    attractor before recording.
    """
    if count < 1:
        raise ValueError("count must be positive")
    inv = np.array(
        [[float(x) for x in row] for row in inverse_matrix_fractions(ts)], dtype=float
    )
    digits = np.array(ts.digits, dtype=float)
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, ts.m, size=count + CHAOS_BURN_IN)
    x = np.zeros(ts.dimension)
    out = np.empty((count, ts.dimension))
    for i, j in enumerate(choices):
        x = inv @ (x + digits[j])
        if i >= CHAOS_BURN_IN:
            out[i - CHAOS_BURN_IN] = x
    return PointCloud(points=out, source="chaos", seed=seed)


def subdivision_points(ts: TileSystem, depth: int) -> PointCloud:
    """The points f_w(0) over all words of the given length, exactly evaluated."""
    zero = tuple(Fraction(0) for _ in range(ts.dimension))
    pts = []
    # lexicographic word order, maps applied from the right
    words = [()]
    for _ in range(depth):
        words = [w + (c,) for w in words for c in range(1, ts.m + 1)]
    for word in words:
        pts.append(_apply_word(ts, word, zero))
    arr = np.array([[float(x) for x in p] for p in pts])
    return PointCloud(points=arr, source="subdivision", seed=None)


def _apply_word(ts: TileSystem, word: Sequence[int], anchor: Sequence[Fraction]):
    """f_word(anchor) by exact rational solves, rounded only on output."""
    x = tuple(Fraction(v) for v in anchor)
    for sym in reversed(tuple(word)):
        shifted = tuple(xq + dq for xq, dq in zip(x, ts.digit(sym)))
        x = solve_exact(ts.matrix, shifted)
    return x


def _loop_anchor(g: NeighborGraph, vertex: tuple):
    """Fixed point of the smallest-label loop at the vertex, or the origin."""
    ts = g.system
    loops = sorted(label for label, w in g.out[vertex] if w == vertex)
    if not loops:
        return tuple(Fraction(0) for _ in range(ts.dimension))
    label = loops[0]
    lhs = tuple(
        tuple(Fraction(ts.matrix[i][j]) - (1 if i == j else 0) for j in range(ts.dimension))
        for i in range(ts.dimension)
    )
    return solve_exact(lhs, ts.digit(label))


def boundary_points(g: NeighborGraph, vertex: tuple, depth: int) -> PointCloud:
    """Sample of one boundary set from its label paths of the given depth.

    Each path contributes f_w(anchor) where the anchor is the fixed point of
    the terminal vertex's loop when one exists, so loop-only vertices
    converge to their single point immediately.
    """
    if vertex == g.root or vertex not in g.out:
        raise ValueError(f"{vertex!r} is not a non-root vertex")
    ts = g.system
    paths: list[tuple[tuple[int, ...], tuple]] = []

    def extend(v: tuple, word: tuple[int, ...]):
        if len(word) == depth:
            paths.append((word, v))
            return
        for label, w in g.out[v]:
            extend(w, word + (label,))

    extend(vertex, ())
    if not paths:
        raise ValueError(f"vertex {vertex!r} has no paths of depth {depth}")
    anchors: dict = {}
    pts = []
    for word, terminal in paths:
        if terminal not in anchors:
            anchors[terminal] = _loop_anchor(g, terminal)
        pts.append(_apply_word(ts, word, anchors[terminal]))
    arr = np.array([[float(x) for x in p] for p in pts])
    return PointCloud(points=arr, source=f"boundary{_vec_tag(vertex)}", seed=None)


def _vec_tag(v: tuple) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


CSV_HEADERS = {1: "x", 2: "x,y", 3: "x,y,z"}


def cloud_csv(cloud: PointCloud) -> str:
    """Deterministic CSV with a seed comment and locale-free formatting."""
    dim = cloud.points.shape[1]
    header = CSV_HEADERS.get(dim, ",".join(f"x{i}" for i in range(dim)))
    lines = [f"# seed={cloud.seed if cloud.seed is not None else 'none'}", header]
    for row in cloud.points:
        lines.append(",".join(format(float(v), ".17g") for v in row))
    return "\n".join(lines) + "\n"


def write_cloud_csv(cloud: PointCloud, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cloud_csv(cloud))


def save_cloud_figure(cloud: PointCloud, path, *, title: str | None = None) -> None:
    """Scatter plot of the cloud (3-d projection for 3-d systems)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    dim = cloud.points.shape[1]
    fig = plt.figure(figsize=(7, 6))
    if dim >= 3:
        ax = fig.add_subplot(projection="3d")
        ax.scatter(
            cloud.points[:, 0], cloud.points[:, 1], cloud.points[:, 2], s=0.3, lw=0
        )
        ax.set_zlabel("z")
    elif dim == 2:
        ax = fig.add_subplot()
        ax.scatter(cloud.points[:, 0], cloud.points[:, 1], s=0.3, lw=0)
        ax.set_aspect("equal")
    else:
        ax = fig.add_subplot()
        ax.scatter(cloud.points[:, 0], np.zeros(len(cloud.points)), s=0.5, lw=0)
    ax.set_xlabel("x")
    if dim >= 2:
        ax.set_ylabel("y")
    ax.set_title(title or cloud.source)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
