"""Hanan grids for d-dimensional rectilinear point sets.

The grid vertex set is the Cartesian product of the distinct coordinate
values per axis; axis-adjacent grid points are joined by an edge costing
their coordinate difference.  An optimum rectilinear Steiner tree lives on
this grid, so solving the graph instance solves the geometric one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import GridTooLarge, TooManyTerminals
from .graph import Graph, SteinerInstance

DEFAULT_VERTEX_CAP = 1 << 26


@dataclass
class PointSet:
    dimension: int
    points: list[tuple[int, ...]]

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension {self.dimension} < 2")
        if not self.points:
            raise ValueError("empty point set")
        for p in self.points:
            if len(p) != self.dimension:
                raise ValueError(f"point {p} is not {self.dimension}-dimensional")


def build_hanan_grid(
    points: PointSet, vertex_cap: int = DEFAULT_VERTEX_CAP
) -> tuple[SteinerInstance, dict[tuple[int, ...], int]]:
    """Build the Hanan-grid Steiner instance for a point set.

    Returns the instance and a map from input point to its grid vertex id.
    Duplicate input points collapse to one terminal; terminal order follows
    first occurrence in the point list.  Vertex ids are row-major over the
    per-axis coordinate ranks, so instances are reproducible byte-for-byte.
    """
    d = points.dimension
    axes = [sorted({p[i] for p in points.points}) for i in range(d)]
    counts = [len(a) for a in axes]
    total = 1
    for c in counts:
        total *= c
        if total > vertex_cap:
            raise GridTooLarge(f"grid would have more than {vertex_cap} vertices")

    # strides for row-major rank indexing: last axis varies fastest
    strides = [0] * d
    acc = 1
    for i in range(d - 1, -1, -1):
        strides[i] = acc
        acc *= counts[i]

    rank = [{val: r for r, val in enumerate(axis)} for axis in axes]

    def vertex_id(point: tuple[int, ...]) -> int:
        return sum(strides[i] * rank[i][point[i]] for i in range(d))

    graph = Graph(total)
    # enumerate vertices by mixed-radix rank vector; connect each vertex to
    # its successor along every axis
    radix = [0] * d
    coords_list: list[tuple[int, ...]] = []
    for vid in range(total):
        point = tuple(axes[i][radix[i]] for i in range(d))
        coords_list.append(point)
        for i in range(d):
            r = radix[i]
            if r + 1 < counts[i]:
                step = axes[i][r + 1] - axes[i][r]
                graph.add_edge(vid, vid + strides[i], step)
        # increment mixed-radix counter
        for i in range(d - 1, -1, -1):
            radix[i] += 1
            if radix[i] < counts[i]:
                break
            radix[i] = 0

    point_to_vertex: dict[tuple[int, ...], int] = {}
    terminals: list[int] = []
    seen: set[int] = set()
    for p in points.points:
        vid = vertex_id(p)
        point_to_vertex[p] = vid
        if vid not in seen:
            seen.add(vid)
            terminals.append(vid)
    if len(terminals) >= 64:
        raise TooManyTerminals(f"{len(terminals)} distinct points; at most 63 supported")

    instance = SteinerInstance(
        graph=graph, terminals=terminals, coords=coords_list
    )
    return instance, point_to_vertex


def hanan_grid_size(points: PointSet) -> tuple[int, int]:
    """Exact (|V|, |E|) of the Hanan grid without building it."""
    d = points.dimension
    counts = [len({p[i] for p in points.points}) for i in range(d)]
    v = 1
    for c in counts:
        v *= c
    e = 0
    for i in range(d):
        others = v // counts[i]
        e += (counts[i] - 1) * others
    return v, e


def generate_random_points(d: int, k: int, coord_max: int, seed: int) -> PointSet:
    """k points with coordinates uniform on {0, ..., coord_max}; seeded."""
    if coord_max < 1:
        raise ValueError("coord_max must be >= 1")
    rng = random.Random(seed)
    pts = [tuple(rng.randint(0, coord_max) for _ in range(d)) for _ in range(k)]
    return PointSet(dimension=d, points=pts)


def parse_points(text: str) -> PointSet:
    """Point file: first line "d k", then k lines of d integers."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty point file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"header must be 'd k', got {lines[0]!r}")
    d, k = int(head[0]), int(head[1])
    if len(lines) - 1 != k:
        raise ValueError(f"declared {k} points but found {len(lines) - 1}")
    pts = []
    for ln in lines[1:]:
        vals = [int(t) for t in ln.split()]
        if len(vals) != d:
            raise ValueError(f"point line {ln!r} is not {d}-dimensional")
        pts.append(tuple(vals))
    return PointSet(dimension=d, points=pts)


def write_points(points: PointSet) -> str:
    out = [f"{points.dimension} {len(points.points)}"]
    for p in points.points:
        out.append(" ".join(str(x) for x in p))
    return "\n".join(out) + "\n"
