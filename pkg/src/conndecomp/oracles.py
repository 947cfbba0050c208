"""Exact brute-force connectivity oracles and packing verifiers.

These are the ground truth for every other module: small and obviously
correct beats fast. Max-flow is plain BFS augmentation on unit capacities.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph import Graph
from .packing import TreePacking

LOAD_TOL = 1e-9

# above this size the per-pair vertex flows switch from the pure-Python
# augmenting-path network to scipy's max-flow on one shared split matrix
_SPARSE_FLOW_MIN_N = 40


class _FlowNet:
    """Adjacency-list flow network with unit/integer capacities."""

    def __init__(self, size: int):
        self.size = size
        self.head = [[] for _ in range(size)]  # per node: indices into arcs
        self.to = []
        self.cap = []

    def add_arc(self, u: int, v: int, cap: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, stop_at: float = float("inf")) -> int:
        """BFS augmenting paths; stops early once flow reaches stop_at."""
        flow = 0
        to, cap, head = self.to, self.cap, self.head
        while flow < stop_at:
            prev_arc = [-1] * self.size
            prev_arc[s] = -2
            q = deque([s])
            while q:
                u = q.popleft()
                if u == t:
                    break
                for a in head[u]:
                    v = to[a]
                    if cap[a] > 0 and prev_arc[v] == -1:
                        prev_arc[v] = a
                        q.append(v)
            if prev_arc[t] == -1:
                break
            v = t
            while v != s:
                a = prev_arc[v]
                cap[a] -= 1
                cap[a ^ 1] += 1
                v = to[a ^ 1]
            flow += 1
        return flow

    def reset(self, snapshot) -> None:
        self.cap[:] = snapshot


def _vertex_flow_value(g: Graph, s: int, t: int, stop_at: float = float("inf")) -> int:
    """Max number of internally vertex-disjoint s-t paths (s, t non-adjacent)."""
    # split each vertex v into in=2v, out=2v+1 with capacity 1
    net = _FlowNet(2 * g.n)
    big = g.n
    for v in range(g.n):
        net.add_arc(2 * v, 2 * v + 1, big if v in (s, t) else 1)
    for u, v in g.edges():
        net.add_arc(2 * u + 1, 2 * v, big)
        net.add_arc(2 * v + 1, 2 * u, big)
    return net.max_flow(2 * s, 2 * t + 1, stop_at)


class _SparseVertexFlow:
    """Vertex-capacity max-flow via scipy on one fixed split matrix.

    Every vertex v becomes in=2v -> out=2v+1 with capacity 1 and each edge
    contributes out->in arcs of large capacity. Flows run from 2s+1 to 2t,
    so the split arcs of s and t themselves never lie on a path and the
    matrix can be reused for every (s, t) pair.
    """

    def __init__(self, g: Graph):
        import numpy as np
        from scipy.sparse import csr_matrix

        big = g.n
        rows, cols, caps = [], [], []
        for v in range(g.n):
            rows.append(2 * v)
            cols.append(2 * v + 1)
            caps.append(1)
        for u, v in g.edges():
            rows.extend((2 * u + 1, 2 * v + 1))
            cols.extend((2 * v, 2 * u))
            caps.extend((big, big))
        self.mat = csr_matrix(
            (np.array(caps, dtype=np.int32), (rows, cols)), shape=(2 * g.n, 2 * g.n)
        )

    def value(self, s: int, t: int) -> int:
        from scipy.sparse.csgraph import maximum_flow

        return int(maximum_flow(self.mat, 2 * s + 1, 2 * t).flow_value)


def vertex_connectivity(g: Graph) -> int:
    """Exact vertex connectivity.

    Standard scheme: the min vertex cut omits at least one of the first
    best+1 vertices, so iterating the flow source over them (starting from a
    min-degree vertex) and minimizing over non-neighbor sinks is exhaustive.
    Complete graphs have connectivity n-1 by convention.
    """
    if g.n < 2:
        return 0
    if not g.is_connected():
        return 0
    best = min(g.degree(v) for v in range(g.n))
    if best == g.n - 1:
        return g.n - 1

    sparse = _SparseVertexFlow(g) if g.n >= _SPARSE_FLOW_MIN_N else None
    sources = [min(range(g.n), key=g.degree)]
    sources += [v for v in range(g.n) if v != sources[0]]
    i = 0
    while i < len(sources) and i <= best:
        s = sources[i]
        neighbors = set(g.adjacency[s])
        for t in range(g.n):
            if t == s or t in neighbors:
                continue
            if sparse is not None:
                best = min(best, sparse.value(s, t))
            else:
                best = min(best, _vertex_flow_value(g, s, t, stop_at=best))
        i += 1
    return best


def edge_connectivity(g: Graph) -> int:
    """Exact edge connectivity: min over t of max-flow(0, t) with unit edge caps."""
    if g.n < 2 or not g.is_connected():
        return 0
    best = min(g.degree(v) for v in range(g.n))
    net = _FlowNet(g.n)
    for u, v in g.edges():
        net.add_arc(u, v, 1)
        net.add_arc(v, u, 1)
    snapshot = list(net.cap)
    s = 0
    for t in range(1, g.n):
        net.reset(snapshot)
        best = min(best, net.max_flow(s, t, stop_at=best))
    return best


def vertex_connectivity_brute(g: Graph) -> int:
    """Exhaustive check over all removal sets; for n <= ~10 only."""
    import itertools

    if g.n < 2 or not g.is_connected():
        return 0
    for size in range(g.n - 1):
        for cut in itertools.combinations(range(g.n), size):
            if _disconnected_without(g, set(cut)):
                return size
    return g.n - 1


def edge_connectivity_brute(g: Graph) -> int:
    """Min edge boundary over all vertex bipartitions; for n <= ~16 only."""
    if g.n < 2 or not g.is_connected():
        return 0
    best = g.m
    for mask in range(1, 1 << (g.n - 1)):  # vertex n-1 stays on one side
        side = {v for v in range(g.n - 1) if mask >> v & 1}
        crossing = sum(1 for u, v in g.edges() if (u in side) != (v in side))
        best = min(best, crossing)
    return best


def _disconnected_without(g: Graph, removed: set) -> bool:
    remaining = [v for v in range(g.n) if v not in removed]
    if len(remaining) <= 1:
        return False
    seen = {remaining[0]}
    q = deque(seen)
    while q:
        u = q.popleft()
        for w in g.adjacency[u]:
            if w not in removed and w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) < len(remaining)


@dataclass
class VerifierReport:
    valid: bool
    total_weight: float
    max_vertex_load: float
    max_edge_load: float
    failures: list = field(default_factory=list)  # (tree id, reason, witness)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "total_weight": self.total_weight,
            "max_vertex_load": self.max_vertex_load,
            "max_edge_load": self.max_edge_load,
            "failures": [[tid, reason, witness] for tid, reason, witness in self.failures],
        }


def _check_tree_shape(g: Graph, tree, require_spanning: bool):
    """Yields (reason, witness) tuples for structural violations of one tree."""
    verts = tree.vertex_set()
    if not verts:
        yield ("not-connected", None)
        return
    for u, v in tree.edges:
        if not g.has_edge(u, v):
            yield ("not-subgraph", (u, v))
            return
    # connected + |E| = |V| - 1  <=>  tree
    adj = {v: [] for v in verts}
    for u, v in tree.edges:
        adj[u].append(v)
        adj[v].append(u)
    start = next(iter(verts))
    seen = {start}
    q = deque([start])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    if len(seen) < len(verts):
        yield ("not-connected", next(iter(verts - seen)))
    elif len(tree.edges) != len(verts) - 1:
        yield ("not-connected", "cycle")  # connected with extra edges => cycle
    if require_spanning:
        if len(verts) != g.n:
            missing = next(v for v in range(g.n) if v not in verts)
            yield ("not-spanning", missing)
    else:
        for v in range(g.n):
            if v in verts:
                continue
            if not any(u in verts for u in g.adjacency[v]):
                yield ("not-dominating", v)
                break


def _verify(g: Graph, p: TreePacking, spanning: bool) -> VerifierReport:
    failures = []
    vload = [0.0] * g.n
    eload: dict = {}
    for tree in p.trees:
        for reason, witness in _check_tree_shape(g, tree, require_spanning=spanning):
            failures.append((tree.id, reason, witness))
        for v in tree.vertex_set():
            if 0 <= v < g.n:
                vload[v] += tree.weight
        for e in tree.edges:
            eload[e] = eload.get(e, 0.0) + tree.weight
    max_v = max(vload, default=0.0)
    max_e = max(eload.values(), default=0.0)
    if spanning:
        for e, load in sorted(eload.items()):
            if load > 1.0 + LOAD_TOL:
                failures.append((-1, "edge-overload", e))
    else:
        for v, load in enumerate(vload):
            if load > 1.0 + LOAD_TOL:
                failures.append((-1, "vertex-overload", v))
    return VerifierReport(
        valid=not failures,
        total_weight=p.total_weight,
        max_vertex_load=max_v,
        max_edge_load=max_e,
        failures=failures,
    )


def verify_dominating_packing(g: Graph, p: TreePacking) -> VerifierReport:
    """Check each tree is a dominating tree of g and vertex loads stay <= 1."""
    return _verify(g, p, spanning=False)


def verify_spanning_packing(g: Graph, p: TreePacking) -> VerifierReport:
    """Check each tree spans g and edge loads stay <= 1."""
    return _verify(g, p, spanning=True)
