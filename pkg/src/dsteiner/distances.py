"""Terminal-to-all shortest path rows and distance-graph spanning trees.

One solver run owns one DistanceOracle: the rows are immutable after
construction, the mst / set-distance caches are single-writer.
"""

from __future__ import annotations

from typing import Sequence

from .bitsets import iter_bits
from .graph import INF, Graph, shortest_paths_from


class DistanceOracle:
    """Shortest-path distances from every terminal, plus cached mst values.

    Terminal sets are int masks over terminal indices 0..k-1 (file order).
    """

    def __init__(self, graph: Graph, terminals: Sequence[int]):
        self.graph = graph
        self.terminals = list(terminals)
        self.k = len(self.terminals)
        self.rows: list[list[int]] = []
        self.preds: list[list[int]] = []
        for t in self.terminals:
            dist, pred = shortest_paths_from(graph, t)
            self.rows.append(dist)
            self.preds.append(pred)
        # k x k matrix of pairwise terminal distances (metric closure on T)
        self.pair = [[self.rows[i][self.terminals[j]] for j in range(self.k)]
                     for i in range(self.k)]
        self._mst_cache: dict[int, int] = {}
        self._cut_cache: dict[int, int] = {}

    def d(self, terminal_index: int, vertex: int) -> int:
        return self.rows[terminal_index][vertex]

    def mst_cost(self, members) -> int:
        """MST cost of the distance graph spanned by the given terminals.

        ``members`` is an int mask or an iterable of terminal indices.
        Empty and singleton sets cost 0.  Values are cached per set.
        """
        mask = members if isinstance(members, int) else 0
        if not isinstance(members, int):
            for i in members:
                mask |= 1 << i
        cached = self._mst_cache.get(mask)
        if cached is not None:
            return cached
        idx = list(iter_bits(mask))
        cost = self._prim(idx)
        self._mst_cache[mask] = cost
        return cost

    def _prim(self, idx: list[int]) -> int:
        if len(idx) <= 1:
            return 0
        pair = self.pair
        in_tree = [False] * len(idx)
        best = [INF] * len(idx)
        best[0] = 0
        total = 0
        for _ in range(len(idx)):
            u = -1
            ub = INF
            for i in range(len(idx)):
                if not in_tree[i] and best[i] < ub:
                    ub = best[i]
                    u = i
            if u < 0:
                return INF  # some terminal unreachable
            in_tree[u] = True
            total += best[u]
            row = pair[idx[u]]
            for i in range(len(idx)):
                if not in_tree[i]:
                    duv = row[idx[i]]
                    if duv < best[i]:
                        best[i] = duv
        return total

    def set_cut_distance(self, label_mask: int, full_mask: int) -> tuple[int, int]:
        """(min distance, achieving outside terminal) across the cut.

        The minimum runs over terminals inside ``label_mask`` and terminals
        outside it; computed once per occurring set and cached.
        """
        cached = self._cut_cache.get(label_mask)
        if cached is not None:
            return cached
        outside = full_mask & ~label_mask
        best = INF
        best_y = -1
        pair = self.pair
        for x in iter_bits(label_mask):
            row = pair[x]
            for y in iter_bits(outside):
                if row[y] < best:
                    best = row[y]
                    best_y = y
        result = (best, best_y)
        self._cut_cache[label_mask] = result
        return result

    def vertex_to_set_distance(self, vertex: int, term_mask: int) -> tuple[int, int]:
        """(min distance, achieving terminal) from a vertex into a terminal set."""
        best = INF
        best_y = -1
        for y in iter_bits(term_mask):
            dv = self.rows[y][vertex]
            if dv < best:
                best = dv
                best_y = y
        return best, best_y
