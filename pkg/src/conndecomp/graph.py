"""Undirected simple graphs: representation, file I/O, and basic algorithms.

Vertices are contiguous integers 0..n-1. Edges are canonical pairs (u, v)
with u < v. Graphs are immutable after construction and safe to share.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

INF = math.inf


class GraphError(ValueError):
    """Malformed or inconsistent graph input."""


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with sorted adjacency lists.

    Build via `Graph.from_edges`; the constructor trusts its arguments.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    m: int
    _diameter_cache: list = field(default_factory=list, compare=False, repr=False)

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if v in adj[u]:
                raise GraphError(f"duplicate edge ({u},{v})")
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        return Graph(n, tuple(tuple(sorted(s)) for s in adj), m)

    def edges(self) -> list[tuple[int, int]]:
        """All edges in canonical sorted order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adjacency[u]
        if len(a) > 8:
            import bisect

            i = bisect.bisect_left(a, v)
            return i < len(a) and a[i] == v
        return v in a

    def bfs_distances(self, source: int) -> list[float]:
        """Hop distances from source; math.inf for unreachable vertices."""
        dist = [INF] * self.n
        dist[source] = 0
        q = deque([source])
        while q:
            u = q.popleft()
            du = dist[u]
            for w in self.adjacency[u]:
                if dist[w] is INF:
                    dist[w] = du + 1
                    q.append(w)
        return dist

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return all(d is not INF for d in self.bfs_distances(0))


def load_graph(path, remap: bool = False) -> Graph:
    """Read a graph from a whitespace-separated edge list.

    Lines starting with '#' and blank lines are ignored. Vertex ids must be
    contiguous from 0 unless `remap` is set, in which case ids are remapped
    in sorted order. Self-loops and duplicate edges are rejected.
    """
    p = Path(path)
    raw_edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(p.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"{p}:{lineno}: expected two integers, got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"{p}:{lineno}: non-integer token in {raw!r}") from exc
        if u < 0 or v < 0:
            raise GraphError(f"{p}:{lineno}: negative vertex id")
        raw_edges.append((u, v))

    ids = sorted({x for e in raw_edges for x in e})
    if remap:
        index = {x: i for i, x in enumerate(ids)}
        raw_edges = [(index[u], index[v]) for u, v in raw_edges]
        n = len(ids)
    else:
        n = (max(ids) + 1) if ids else 0
        if ids != list(range(n)):
            raise GraphError(f"{p}: vertex ids not contiguous from 0 (use remap)")
    return Graph.from_edges(n, raw_edges)


def save_graph(g: Graph, path) -> None:
    """Write the canonical sorted edge list; round-trips with load_graph."""
    lines = [f"{u} {v}" for u, v in g.edges()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


class UnionFind:
    """Array-backed disjoint sets with union by rank and path halving."""

    __slots__ = ("parent", "rank", "count")

    def __init__(self, size: int = 0):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.count = size

    def add(self) -> int:
        """Append a fresh singleton; returns its element id."""
        x = len(self.parent)
        self.parent.append(x)
        self.rank.append(0)
        self.count += 1
        return x

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        """Merge the sets of x and y; returns True if they were distinct."""
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        self.count -= 1
        return True


def connected_components(g: Graph, active_edges=None) -> list[int]:
    """Per-vertex component labels of the (optionally filtered) graph.

    `active_edges` is a predicate on canonical (u, v) pairs; None keeps all
    edges. The label of a component is its minimum vertex id.
    """
    label = [-1] * g.n
    for start in range(g.n):
        if label[start] != -1:
            continue
        label[start] = start
        q = deque([start])
        while q:
            u = q.popleft()
            for w in g.adjacency[u]:
                if label[w] != -1:
                    continue
                if active_edges is not None and not active_edges(canonical_edge(u, w)):
                    continue
                label[w] = start
                q.append(w)
    return label


def diameter(g: Graph) -> float:
    """Exact diameter via all-pairs BFS; math.inf if disconnected, 0 for n <= 1."""
    if g._diameter_cache:
        return g._diameter_cache[0]
    if g.n <= 1:
        d = 0.0
    else:
        d = 0.0
        for s in range(g.n):
            ecc = max(g.bfs_distances(s))
            if ecc is INF:
                d = INF
                break
            d = max(d, ecc)
    g._diameter_cache.append(d)
    return d


def mst(g: Graph, cost) -> list[tuple[int, int]]:
    """Minimum spanning tree edges under `cost` (a function of canonical edges).

    Ties are broken by canonical edge order, so the output is deterministic.
    Raises GraphError on disconnected input.
    """
    if g.n == 0:
        return []
    edges = g.edges()
    edges.sort(key=lambda e: (cost(e), e))
    uf = UnionFind(g.n)
    out = []
    for e in edges:
        if uf.union(e[0], e[1]):
            out.append(e)
            if len(out) == g.n - 1:
                break
    if len(out) != g.n - 1:
        raise GraphError("graph is disconnected; no spanning tree exists")
    return out


def log_star(x: float) -> int:
    """Base-2 iterated logarithm, clamped to at least 1."""
    count = 0
    while x > 1:
        x = math.log2(x)
        count += 1
    return max(count, 1)
