"""Graph representation, shortest paths, zero-edge contraction, tree validation.

Edge costs are nonnegative integers; unreachable distances are the INF
sentinel and every addition against it saturates, so cost arithmetic is
exact everywhere.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import ContainsCycle, MissingTerminal, NotConnected

# Reserved "unreachable"/"unset" sentinel; additions saturate at it.
INF = (1 << 63) - 1


def sat_add(a: int, b: int) -> int:
    if a >= INF or b >= INF:
        return INF
    return a + b


class Graph:
    """Undirected graph with integer edge costs, stored as adjacency lists."""

    __slots__ = ("n", "m", "adj", "_edge_cost")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        self.n = n
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self._edge_cost: dict[tuple[int, int], int] = {}
        self.m = 0
        for u, v, c in edges:
            self.add_edge(u, v, c)

    def add_edge(self, u: int, v: int, cost: int) -> None:
        """Insert {u, v}; parallel edges collapse to the cheaper cost."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if cost < 0:
            raise ValueError(f"negative cost {cost} on edge ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        old = self._edge_cost.get(key)
        if old is None:
            self._edge_cost[key] = cost
            self.adj[u].append((v, cost))
            self.adj[v].append((u, cost))
            self.m += 1
        elif cost < old:
            self._edge_cost[key] = cost
            self.adj[u] = [(w, (cost if w == v else c)) for w, c in self.adj[u]]
            self.adj[v] = [(w, (cost if w == u else c)) for w, c in self.adj[v]]

    def edge_cost(self, u: int, v: int) -> Optional[int]:
        return self._edge_cost.get((u, v) if u < v else (v, u))

    def edges(self) -> list[tuple[tuple[int, int], int]]:
        return list(self._edge_cost.items())


@dataclass
class SteinerInstance:
    """A graph plus an ordered terminal list; order drives root selection."""

    graph: Graph
    terminals: list[int]
    name: str = ""
    # one integer coordinate vector per vertex; entries may be None when the
    # instance file only carries coordinates for some vertices
    coords: Optional[list[Optional[tuple[int, ...]]]] = None

    def __post_init__(self):
        if not (1 <= len(self.terminals) <= 63):
            raise ValueError(f"terminal count {len(self.terminals)} outside 1..63")
        seen = set()
        for t in self.terminals:
            if not (0 <= t < self.graph.n):
                raise ValueError(f"terminal {t} out of range")
            if t in seen:
                raise ValueError(f"duplicate terminal {t}")
            seen.add(t)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def k(self) -> int:
        return len(self.terminals)


def shortest_paths_from(graph: Graph, source: int) -> tuple[list[int], list[int]]:
    """Dijkstra from ``source``: (distance array, predecessor array).

    Binary heap with lazy deletion; unreachable vertices stay at INF with
    predecessor -1.  Ties resolve toward the smaller pushed vertex id.
    """
    dist = [INF] * graph.n
    pred = [-1] * graph.n
    dist[source] = 0
    heap = [(0, source)]
    adj = graph.adj
    while heap:
        d, u = heapq.heappop(heap)
        if d != dist[u]:
            continue
        for v, c in adj[u]:
            nd = d + c
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def multi_source_dijkstra(
    graph: Graph, seeds: Sequence[tuple[int, int]]
) -> tuple[list[int], list[int]]:
    """Dijkstra seeded with (vertex, initial cost) pairs."""
    dist = [INF] * graph.n
    pred = [-1] * graph.n
    heap = []
    for v, d0 in seeds:
        if d0 < dist[v]:
            dist[v] = d0
            heapq.heappush(heap, (d0, v))
    adj = graph.adj
    while heap:
        d, u = heapq.heappop(heap)
        if d != dist[u]:
            continue
        for v, c in adj[u]:
            nd = d + c
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def validate_tree(instance: SteinerInstance, edges: Sequence[tuple[int, int]]) -> int:
    """Check that ``edges`` forms a tree spanning all terminals; return its cost.

    Raises ContainsCycle / NotConnected / MissingTerminal naming the violation,
    ValueError if an edge is not present in the graph.
    """
    if not edges:
        if instance.k == 1:
            return 0
        raise MissingTerminal("empty edge set but more than one terminal")
    cost = 0
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v in edges:
        c = instance.graph.edge_cost(u, v)
        if c is None:
            raise ValueError(f"({u}, {v}) is not an edge of the graph")
        cost += c
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise ContainsCycle(f"edge ({u}, {v}) closes a cycle")
        parent[ru] = rv
    for t in instance.terminals:
        if t not in parent:
            raise MissingTerminal(f"terminal {t} not covered by the tree")
    roots = {find(t) for t in instance.terminals}
    if len(roots) > 1 or any(find(x) not in roots for x in parent):
        raise NotConnected("edge set has more than one component")
    return cost


@dataclass
class ContractionMap:
    """Maps a zero-edge-contracted instance back to the original one."""

    old_to_new: list[int]
    # per new vertex: zero-cost original edges spanning its merged component
    component_edges: list[list[tuple[int, int]]]
    # per contracted edge (u', v'): a cheapest original edge realizing it
    edge_witness: dict[tuple[int, int], tuple[int, int]]
    representative: list[int]  # one original vertex per new vertex

    def lift_edges(self, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
        """Translate contracted tree edges into original-graph tree edges."""
        lifted: list[tuple[int, int]] = []
        touched: set[int] = set()
        for u, v in edges:
            key = (u, v) if u < v else (v, u)
            lifted.append(self.edge_witness[key])
            touched.add(u)
            touched.add(v)
        for comp in touched:
            lifted.extend(self.component_edges[comp])
        return lifted

    def lift_single_vertex(self, new_vertex: int) -> list[tuple[int, int]]:
        return list(self.component_edges[new_vertex])


def contract_zero_edges(
    instance: SteinerInstance,
) -> tuple[SteinerInstance, ContractionMap]:
    """Contract all zero-cost edges; the result has strictly positive costs.

    Merged vertices keep terminal status if any member was a terminal, and
    terminal order follows the first occurrence in the original order.  The
    returned map lifts any contracted tree back to an original tree of the
    same cost (zero edges re-inserted).
    """
    g = instance.graph
    parent = list(range(g.n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    # spanning zero-edges recorded as they merge components
    zero_span: dict[int, list[tuple[int, int]]] = {}
    for (u, v), c in g.edges():
        if c == 0:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                merged = zero_span.pop(ru, []) + zero_span.pop(rv, [])
                merged.append((u, v))
                zero_span[rv] = merged

    comp_of: dict[int, int] = {}
    old_to_new = [0] * g.n
    representative: list[int] = []
    for v in range(g.n):
        r = find(v)
        if r not in comp_of:
            comp_of[r] = len(representative)
            representative.append(v)
        old_to_new[v] = comp_of[r]

    new_n = len(representative)
    new_graph = Graph(new_n)
    edge_witness: dict[tuple[int, int], tuple[int, int]] = {}
    for (u, v), c in g.edges():
        nu, nv = old_to_new[u], old_to_new[v]
        if nu == nv:
            continue
        key = (nu, nv) if nu < nv else (nv, nu)
        prev = new_graph.edge_cost(nu, nv)
        if prev is None or c < prev:
            edge_witness[key] = (u, v)
        new_graph.add_edge(nu, nv, c)

    new_terminals: list[int] = []
    seen: set[int] = set()
    for t in instance.terminals:
        nt = old_to_new[t]
        if nt not in seen:
            seen.add(nt)
            new_terminals.append(nt)

    component_edges = [[] for _ in range(new_n)]
    for root, span in zero_span.items():
        component_edges[comp_of[find(root)]] = span

    new_coords = None
    if instance.coords is not None:
        new_coords = [instance.coords[representative[i]] for i in range(new_n)]

    reduced = SteinerInstance(
        graph=new_graph,
        terminals=new_terminals,
        name=instance.name,
        coords=new_coords,
    )
    cmap = ContractionMap(
        old_to_new=old_to_new,
        component_edges=component_edges,
        edge_witness=edge_witness,
        representative=representative,
    )
    return reduced, cmap
