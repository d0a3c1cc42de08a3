"""Valid lower bounds used as future-cost estimates by the solver.

Every bound B satisfies B(root, {root}) = 0 and the consistency inequality
B(v, J) <= B(w, J') + smt((J \\ J') | {v, w}) for root-containing J' <= J,
which makes the labeling algorithm's goal-oriented selection exact.

All values are handled doubled (2*B) so the halved 1-tree and TSP bounds
stay in exact integer arithmetic; the solver compares 2*l + 2*L uniformly.
Terminal sets are int masks over terminal indices; the root's bit must be
present for a nonzero value (sets without the root evaluate to 0).
"""

from __future__ import annotations

import heapq
from typing import Sequence

from .bitsets import iter_bits, iter_subsets_of_size_at_most
from .distances import DistanceOracle
from .errors import TspTableTooLarge
from .graph import INF, SteinerInstance

DEFAULT_TSP_CAP = 20


class BoundOracle:
    """Base class: per-argument cache plus the doubled-value contract."""

    name = "bound"

    def __init__(self):
        self._cache: dict[tuple[int, int], int] = {}
        self.evaluations = 0

    def value2(self, v: int, jmask: int) -> int:
        """2 * B(v, set(jmask)); cached so each argument is computed once."""
        key = (v, jmask)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        self.evaluations += 1
        val = self._evaluate2(v, jmask)
        self._cache[key] = val
        return val

    def _evaluate2(self, v: int, jmask: int) -> int:
        raise NotImplementedError


class ZeroBound(BoundOracle):
    name = "zero"

    def _evaluate2(self, v, jmask):
        return 0


class OneTreeBound(BoundOracle):
    """Half of (cheapest 1-tree through v over the distance graph of J).

    Doubled value: min over i, j in J (distinct unless |J| = 1) of
    d(v,i) + d(v,j), plus mst(J); spanning tree costs are cached per set
    and computed on first sight of a set.
    """

    name = "onetree"

    def __init__(self, oracle: DistanceOracle, root_bit: int):
        super().__init__()
        self.oracle = oracle
        self.root_bit = root_bit
        # per-set distance-row lists and mst values; sets repeat across
        # thousands of vertices, so this dominates evaluation cost
        self._set_rows: dict[int, tuple[list, int]] = {}

    def _evaluate2(self, v, jmask):
        if not jmask & self.root_bit:
            return 0
        cached = self._set_rows.get(jmask)
        if cached is None:
            rows = self.oracle.rows
            cached = (
                [rows[t] for t in iter_bits(jmask)],
                self.oracle.mst_cost(jmask),
            )
            self._set_rows[jmask] = cached
        set_rows, mst = cached
        best1 = best2 = INF
        for row in set_rows:
            dv = row[v]
            if dv < best1:
                best2 = best1
                best1 = dv
            elif dv < best2:
                best2 = dv
        if len(set_rows) == 1:
            pair_sum = best1 + best1 if best1 < INF else INF
        else:
            pair_sum = best1 + best2 if best2 < INF else INF
        if pair_sum >= INF or mst >= INF:
            return INF
        return pair_sum + mst


class JTermBound(BoundOracle):
    """Best optimum over root-containing terminal subsets of size <= j+1.

    Preprocessing stores smt({v} | S) arrays for every terminal set S with
    at most j-1 non-root members, built by a rootless, boundless run over
    terminal sets of increasing cardinality.  Evaluation splits into a
    v-dependent scan over the stored arrays and a per-set maximum that is
    memoized the first time a set is queried.
    """

    name = "jterm"

    def __init__(self, instance: SteinerInstance, oracle: DistanceOracle,
                 root_index: int, j: int):
        super().__init__()
        if j not in (1, 2, 3):
            raise ValueError(f"jterm bound supports j in 1..3, got {j}")
        self.j = j
        self.oracle = oracle
        self.root_bit = 1 << root_index
        self.terminals = instance.terminals
        k = len(self.terminals)
        sources_mask = ((1 << k) - 1) ^ self.root_bit
        self._per_set_max: dict[int, int] = {}
        self._scan_tables: dict[int, list] = {}
        # tables[mask][v] = smt({v} | terms(mask)) for every mask with at
        # most j-1 source bits (root bit optional); singletons reuse the
        # distance rows.
        family: list[int] = []
        for src in iter_subsets_of_size_at_most(sources_mask, j - 1):
            if src:
                family.append(src)
            family.append(src | self.root_bit)
        family.sort(key=lambda m: m.bit_count())
        tables: dict[int, Sequence[int]] = {}
        graph = instance.graph
        n = graph.n
        adj = graph.adj
        for mask in family:
            if mask & (mask - 1) == 0:
                tables[mask] = oracle.rows[mask.bit_length() - 1]
                continue
            arr = [INF] * n
            low = mask & -mask
            sub = (mask - 1) & mask
            while sub:
                if sub & low and sub != mask:
                    da = tables[sub]
                    db = tables[mask ^ sub]
                    for v in range(n):
                        c = da[v] + db[v]
                        if c < arr[v]:
                            arr[v] = c
                sub = (sub - 1) & mask
            heap = [(c, v) for v, c in enumerate(arr) if c < INF]
            heapq.heapify(heap)
            while heap:
                c, u = heapq.heappop(heap)
                if c != arr[u]:
                    continue
                for w, ec in adj[u]:
                    nc = c + ec
                    if nc < arr[w]:
                        arr[w] = nc
                        heapq.heappush(heap, (nc, w))
            tables[mask] = arr
        self.tables = tables

    def _set_max(self, jmask: int) -> int:
        """max of smt(S | {root}) over S <= sources(jmask), |S| <= j."""
        cached = self._per_set_max.get(jmask)
        if cached is not None:
            return cached
        src_part = jmask & ~self.root_bit
        best = 0
        for s in iter_subsets_of_size_at_most(src_part, self.j):
            if s == 0:
                continue
            low = s & -s
            anchor = self.terminals[low.bit_length() - 1]
            val = self.tables[(s ^ low) | self.root_bit][anchor]
            if val > best and val < INF:
                best = val
        self._per_set_max[jmask] = best
        return best

    def _evaluate2(self, v, jmask):
        if not jmask & self.root_bit:
            return 0
        scan = self._scan_tables.get(jmask)
        if scan is None:
            src_part = jmask & ~self.root_bit
            scan = [
                self.tables[s | self.root_bit]
                for s in iter_subsets_of_size_at_most(src_part, self.j - 1)
            ]
            self._scan_tables[jmask] = scan
        best = 0
        for table in scan:
            val = table[v]
            if val > best and val < INF:
                best = val
        per_set = self._set_max(jmask)
        if per_set > best:
            best = per_set
        return 2 * best


class TspBound(BoundOracle):
    """Half the optimum tour through J and v in the distance graph.

    Preprocessing tabulates shortest Hamiltonian paths with given endpoint
    pairs for every terminal subset; a query inserts v between every pair
    of potential tour neighbors in O(|J|^2).
    """

    name = "tsp"

    def __init__(self, instance: SteinerInstance, oracle: DistanceOracle,
                 root_index: int, cap: int = DEFAULT_TSP_CAP):
        super().__init__()
        k = instance.k
        if k > cap:
            raise TspTableTooLarge(f"k={k} exceeds the TSP table cap {cap}")
        self.oracle = oracle
        self.root_bit = 1 << root_index
        self.terminals = instance.terminals
        self.term_index = {t: i for i, t in enumerate(instance.terminals)}
        pair = oracle.pair
        # paths[mask][(a, b)] = cheapest Hamiltonian path on terms(mask)
        # with endpoints a <= b (a == b only for singletons)
        paths: dict[int, dict[tuple[int, int], int]] = {}
        for i in range(k):
            paths[1 << i] = {(i, i): 0}
        order = sorted(range(1, 1 << k), key=lambda m: m.bit_count())
        full = (1 << k) - 1
        for mask in order:
            table = paths.get(mask)
            if table is None:
                continue
            free = full ^ mask
            for (a, b), cost in table.items():
                for t in iter_bits(free):
                    nm = mask | (1 << t)
                    dest = paths.setdefault(nm, {})
                    # extend at endpoint b
                    c1 = cost + pair[b][t]
                    key1 = (a, t) if a <= t else (t, a)
                    if c1 < dest.get(key1, INF):
                        dest[key1] = c1
                    # extend at endpoint a (same thing for singletons)
                    if a != b:
                        c2 = cost + pair[a][t]
                        key2 = (b, t) if b <= t else (t, b)
                        if c2 < dest.get(key2, INF):
                            dest[key2] = c2
        self.paths = paths
        self._tour_cache: dict[int, int] = {}

    def _tour(self, mask: int) -> int:
        """Exact optimum tour cost on the terminals of ``mask``."""
        cached = self._tour_cache.get(mask)
        if cached is not None:
            return cached
        bits = list(iter_bits(mask))
        if len(bits) == 1:
            val = 0
        elif len(bits) == 2:
            val = 2 * self.oracle.pair[bits[0]][bits[1]]
        else:
            pair = self.oracle.pair
            val = INF
            for (a, b), cost in self.paths[mask].items():
                c = cost + pair[a][b]
                if c < val:
                    val = c
        self._tour_cache[mask] = val
        return val

    def _evaluate2(self, v, jmask):
        if not jmask & self.root_bit:
            return 0
        ti = self.term_index.get(v)
        if ti is not None and jmask & (1 << ti):
            return self._tour(jmask)
        rows = self.oracle.rows
        bits = list(iter_bits(jmask))
        if len(bits) == 1:
            d = rows[bits[0]][v]
            return 2 * d if d < INF else INF
        best = INF
        for (a, b), cost in self.paths[jmask].items():
            c = cost + rows[a][v] + rows[b][v]
            if c < best:
                best = c
        return min(best, INF)


class MaxBound(BoundOracle):
    name = "max"

    def __init__(self, parts: list[BoundOracle]):
        super().__init__()
        if not parts:
            raise ValueError("max bound needs at least one component")
        self.parts = parts

    def _evaluate2(self, v, jmask):
        return max(p.value2(v, jmask) for p in self.parts)


# --- bound selection grammar: zero | jterm:<j> | onetree | tsp | max(a,b,...) ---

def _split_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def make_bound(spec: str, instance: SteinerInstance, root_index: int,
               oracle: DistanceOracle, tsp_cap: int = DEFAULT_TSP_CAP) -> BoundOracle:
    """Build a bound evaluator from its selection string."""
    spec = spec.strip()
    low = spec.lower()
    if low == "zero":
        return ZeroBound()
    if low == "onetree":
        return OneTreeBound(oracle, 1 << root_index)
    if low == "tsp":
        return TspBound(instance, oracle, root_index, cap=tsp_cap)
    if low.startswith("jterm"):
        j = 2 if ":" not in spec else int(spec.split(":", 1)[1])
        return JTermBound(instance, oracle, root_index, j)
    if low.startswith("max(") and spec.endswith(")"):
        parts = [make_bound(p, instance, root_index, oracle, tsp_cap)
                 for p in _split_args(spec[4:-1])]
        return MaxBound(parts)
    raise ValueError(f"unknown bound spec {spec!r}")
