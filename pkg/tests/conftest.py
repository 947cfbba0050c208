"""Shared test helpers: brute-force enumerators and small graph corpora."""

from __future__ import annotations

import itertools

from conndecomp.graph import Graph, UnionFind


def spanning_trees_brute(g: Graph) -> list:
    """All spanning trees as sorted edge tuples; for tiny graphs only."""
    edges = g.edges()
    if g.n <= 1:
        return [()]
    out = []
    for combo in itertools.combinations(range(len(edges)), g.n - 1):
        uf = UnionFind(g.n)
        ok = True
        for j in combo:
            if not uf.union(*edges[j]):
                ok = False
                break
        if ok:
            out.append(tuple(edges[j] for j in combo))
    return out


def kruskal_reference(g: Graph, order) -> list:
    """Edge indices picked by Kruskal scanning `order`; canonical baseline."""
    edges = g.edges()
    uf = UnionFind(g.n)
    picked = []
    for j in order:
        if uf.union(*edges[int(j)]):
            picked.append(int(j))
    return sorted(picked)


def circulant(n: int, dists=(1, 2)) -> Graph:
    edge_set = set()
    for v in range(n):
        for d in dists:
            u, w = v, (v + d) % n
            edge_set.add((u, w) if u < w else (w, u))
    return Graph.from_edges(n, sorted(edge_set))


def even_odd_classes(n: int) -> list:
    return [list(range(0, n, 2)), list(range(1, n, 2))]


def dominates(g: Graph, support) -> bool:
    sup = set(support)
    if not sup:
        return False
    return all(v in sup or any(u in sup for u in g.adjacency[v]) for v in range(g.n))


def induced_components(g: Graph, support) -> list:
    """Connected components of the subgraph induced by `support`."""
    left = set(support)
    comps = []
    while left:
        start = next(iter(left))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if w in left and w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(seen)
        left -= seen
    return comps
