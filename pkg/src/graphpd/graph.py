"""Immutable simple undirected graphs with stable integer vertex ids.

Vertex ids are arbitrary non-negative integers and are preserved verbatim
by every operation in this package: reductions never renumber, so filter
values computed on the original graph stay attached to the right vertices
all the way through a pipeline.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from collections.abc import Iterable

from .errors import InputError


class Graph:
    """Simple undirected graph, immutable after construction.

    Adjacency is stored as sorted tuples of neighbor ids. All query
    methods are pure reads and safe to call concurrently.
    """

    __slots__ = ("_adj", "_vertices", "_num_edges")

    def __init__(
        self,
        vertices: Iterable[int] = (),
        edges: Iterable[tuple[int, int]] = (),
    ):
        adj: dict[int, set[int]] = {}
        for v in vertices:
            if v < 0:
                raise InputError(f"vertex ids must be non-negative, got {v}")
            adj.setdefault(v, set())
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop on vertex {u} is not allowed")
            if u not in adj:
                raise InputError(f"edge ({u}, {v}) references unknown vertex {u}")
            if v not in adj:
                raise InputError(f"edge ({u}, {v}) references unknown vertex {v}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj: dict[int, tuple[int, ...]] = {
            v: tuple(sorted(ns)) for v, ns in sorted(adj.items())
        }
        self._vertices: tuple[int, ...] = tuple(self._adj)
        self._num_edges: int = sum(len(ns) for ns in self._adj.values()) // 2

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph whose vertex set is exactly the edge endpoints."""
        edges = list(edges)
        verts = {u for e in edges for u in e}
        return cls(verts, edges)

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        """All vertex ids, ascending."""
        return self._vertices

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return self._num_edges

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    __hash__ = None  # mutable-sized payload; equality is structural

    def __repr__(self) -> str:
        return f"Graph(|V|={self.num_vertices}, |E|={self.num_edges})"

    def _require(self, v: int) -> None:
        if v not in self._adj:
            raise InputError(f"unknown vertex id {v}")

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Open neighborhood of v as a sorted tuple."""
        self._require(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._require(v)
        return len(self._adj[v])

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        """N[v] = {v} together with all neighbors of v, sorted."""
        self._require(v)
        return tuple(sorted((v, *self._adj[v])))

    def has_edge(self, u: int, v: int) -> bool:
        self._require(u)
        self._require(v)
        ns = self._adj[u]
        i = bisect_left(ns, v)
        return i < len(ns) and ns[i] == v

    def edges(self) -> Iterable[tuple[int, int]]:
        """All edges as (u, v) with u < v, in ascending order."""
        for u, ns in self._adj.items():
            for v in ns:
                if v > u:
                    yield (u, v)

    def induced_subgraph(self, keep: Iterable[int]) -> Graph:
        """Subgraph on `keep` with exactly the edges internal to it.

        Vertex ids are preserved. Raises if `keep` mentions an unknown id.
        """
        keep_set = set(keep)
        for v in keep_set:
            self._require(v)
        edges = [
            (u, v)
            for u in keep_set
            for v in self._adj[u]
            if v > u and v in keep_set
        ]
        return Graph(keep_set, edges)


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Partition of the vertex set into maximal connected cells.

    Cells are sorted tuples, listed in ascending order of their smallest
    member. The empty graph yields an empty partition.
    """
    seen: set[int] = set()
    cells: list[tuple[int, ...]] = []
    for start in g.vertex_ids:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        cell = [start]
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    cell.append(w)
                    queue.append(w)
        cells.append(tuple(sorted(cell)))
    return cells


def bfs_distances(g: Graph, source: int, max_depth: int | None = None) -> dict[int, int]:
    """Shortest-path distances from `source`, optionally depth-bounded.

    Unreachable vertices are absent from the result.
    """
    g._require(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if max_depth is not None and d >= max_depth:
            continue
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def graph_power(g: Graph, n: int) -> Graph:
    """Graph with the same vertices and edges between all pairs at distance <= n.

    Pairs in different components are never connected. Computed by an
    n-bounded breadth-first search from each vertex, so no all-pairs
    distance matrix is materialized.
    """
    if n < 1:
        raise InputError(f"graph power requires n >= 1, got {n}")
    edges = []
    for v in g.vertex_ids:
        for w in bfs_distances(g, v, max_depth=n):
            if w > v:
                edges.append((v, w))
    return Graph(g.vertex_ids, edges)


def diameter(g: Graph) -> int:
    """Largest finite shortest-path distance; 0 for graphs with <= 1 vertex.

    On disconnected graphs this is the maximum over components.
    """
    best = 0
    for v in g.vertex_ids:
        dist = bfs_distances(g, v)
        ecc = max(dist.values())
        if ecc > best:
            best = ecc
    return best


def clustering_coefficient(g: Graph) -> float:
    """Mean of local clustering coefficients over all vertices.

    A vertex of degree < 2 contributes 0; the empty graph is defined as 0.
    This is the average clustering coefficient, not the transitivity ratio.
    """
    if g.num_vertices == 0:
        return 0.0
    total = 0.0
    for v in g.vertex_ids:
        ns = g.neighbors(v)
        d = len(ns)
        if d < 2:
            continue
        nset = set(ns)
        links = 0
        for u in ns:
            for w in g.neighbors(u):
                if w > u and w in nset:
                    links += 1
        total += 2.0 * links / (d * (d - 1))
    return total / g.num_vertices
