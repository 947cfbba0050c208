"""Deterministic graph generators, including the low-connectivity/low-diameter
family used for hard instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import rng
from .graph import Graph


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), deterministic per seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0,1]")
    edges = []
    if p >= 1.0:
        edges = list(itertools.combinations(range(n), 2))
    elif p > 0.0:
        r = rng.np_stream(seed, "gnp", n, p)
        for u in range(n):
            draws = r.random(n - u - 1)
            edges.extend((u, u + 1 + int(i)) for i in (draws < p).nonzero()[0])
    return Graph.from_edges(n, edges)


def gen_clique(s: int) -> Graph:
    return Graph.from_edges(s, itertools.combinations(range(s), 2))


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def gen_path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gen_hypercube(d: int) -> Graph:
    if d < 1:
        raise ValueError("hypercube needs d >= 1")
    n = 1 << d
    edges = [(u, u ^ (1 << b)) for u in range(n) for b in range(d) if u < u ^ (1 << b)]
    return Graph.from_edges(n, edges)


def gen_clique_chain(c: int, s: int) -> Graph:
    """Chain of c cliques of size s joined by single bridge vertices.

    Vertex connectivity 1 (each bridge is a cut vertex), diameter ~2c.
    """
    if c < 2 or s < 2:
        raise ValueError("clique_chain needs c >= 2, s >= 2")
    edges = []
    blocks = [list(range(i * s, (i + 1) * s)) for i in range(c)]
    for block in blocks:
        edges.extend(itertools.combinations(block, 2))
    nxt = c * s
    for i in range(c - 1):
        bridge = nxt
        nxt += 1
        edges.append((blocks[i][-1], bridge))
        edges.append((bridge, blocks[i + 1][0]))
    return Graph.from_edges(nxt, edges)


def gen_structured(kind: str, **params) -> Graph:
    """Dispatch on kind in {clique, cycle, path, hypercube, clique_chain}."""
    table = {
        "clique": gen_clique,
        "cycle": gen_cycle,
        "path": gen_path,
        "hypercube": gen_hypercube,
        "clique_chain": gen_clique_chain,
    }
    if kind not in table:
        raise ValueError(f"unknown structured kind {kind!r}")
    return table[kind](**params)


@dataclass
class LowerBoundLabels:
    """Node roles in the two-sided path-bundle graph.

    `a` and `b` are the hub vertices; `u_x[x]` / `v_y[y]` are the light
    attachment vertices for the two index sets; `path_clique[(z, q)]` lists
    the clique replacing position q (1-based, up to 2*ell) on path z
    (0..h).
    """

    a: int
    b: int
    u_x: dict
    v_y: dict
    path_clique: dict


def gen_lower_bound_graph(h: int, ell: int, w: int, X, Y) -> tuple[Graph, LowerBoundLabels]:
    """Two-sided bundle of h+1 heavy paths with hub vertices a, b.

    Heavy path positions become cliques of size w, adjacencies become
    complete bipartite subgraphs, and the index sets X, Y select which side
    paths attach to path 0 through a light intermediate vertex. With
    |X ∩ Y| = 1 the graph has a vertex cut of size 4; with X and Y disjoint
    every vertex cut has size at least w. Diameter is at most 3.
    """
    X, Y = set(X), set(Y)
    if h < 2 or ell < 1 or w <= 1:
        raise ValueError("need h >= 2, ell >= 1, w > 1")
    if not X <= set(range(1, h + 1)) or not Y <= set(range(1, h + 1)):
        raise ValueError("X and Y must be subsets of {1..h}")
    if len(X & Y) > 1:
        raise ValueError("|X ∩ Y| must be at most 1")

    nxt = 0

    def fresh(count: int) -> list[int]:
        nonlocal nxt
        ids = list(range(nxt, nxt + count))
        nxt += count
        return ids

    path_clique = {}
    for z in range(h + 1):
        for q in range(1, 2 * ell + 1):
            path_clique[(z, q)] = fresh(w)
    (a,) = fresh(1)
    (b,) = fresh(1)
    u_x = {x: fresh(1)[0] for x in sorted(X)}
    v_y = {y: fresh(1)[0] for y in sorted(Y)}

    edges = set()

    def clique(nodes):
        edges.update(itertools.combinations(nodes, 2))

    def join(left, right):
        # complete bipartite between two vertex groups
        for p in left:
            for q in right:
                edges.add((p, q) if p < q else (q, p))

    for nodes in path_clique.values():
        clique(nodes)
    for z in range(h + 1):
        for q in range(1, 2 * ell):
            join(path_clique[(z, q)], path_clique[(z, q + 1)])
    # left side: path 0 start connects to each path z start, through u_x if z in X
    for z in range(1, h + 1):
        if z in X:
            join([u_x[z]], path_clique[(0, 1)])
            join([u_x[z]], path_clique[(z, 1)])
        else:
            join(path_clique[(0, 1)], path_clique[(z, 1)])
    # right side, symmetric with Y at position 2*ell
    for z in range(1, h + 1):
        if z in Y:
            join([v_y[z]], path_clique[(0, 2 * ell)])
            join([v_y[z]], path_clique[(z, 2 * ell)])
        else:
            join(path_clique[(0, 2 * ell)], path_clique[(z, 2 * ell)])
    # hubs: a covers the left half plus all u_x, b the right half plus all v_y
    edges.add((a, b) if a < b else (b, a))
    for (z, q), nodes in path_clique.items():
        join([a] if q <= ell else [b], nodes)
    join([a], list(u_x.values()))
    join([b], list(v_y.values()))

    g = Graph.from_edges(nxt, sorted(edges))
    return g, LowerBoundLabels(a=a, b=b, u_x=u_x, v_y=v_y, path_clique=path_clique)
