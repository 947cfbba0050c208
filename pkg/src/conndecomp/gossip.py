"""Information dissemination over a tree packing.

Each message is handed to a uniformly random tree of the packing and
pipeline-broadcast inside that tree. All trees work concurrently: a node
belonging to several trees time-shares its rounds round-robin over its
trees. Broadcasts reach all graph neighbors (one message per node per
round), so nodes outside a tree still receive everything a dominating tree
transmits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from . import rng as rnglib
from .graph import Graph
from .packing import TreePacking
from .sim import SimConfig, Transcript, default_budget, id_bits


class GossipError(RuntimeError):
    """Invalid packing or round cap exceeded before completion."""


@dataclass
class GossipPlan:
    messages: list  # (origin node, message id)
    tree_of: dict  # message id -> tree id
    queues: dict = field(default_factory=dict)  # tree id -> [message ids]


def make_gossip_plan(messages, tree_ids, seed: int) -> GossipPlan:
    """Uniform random tree per message, deterministic per seed."""
    r = rnglib.stream(seed, "gossip-plan")
    tree_ids = sorted(tree_ids)
    tree_of = {}
    queues: dict = {tid: [] for tid in tree_ids}
    for _origin, mid in messages:
        tid = tree_ids[r.randrange(len(tree_ids))]
        tree_of[mid] = tid
        queues[tid].append(mid)
    return GossipPlan(messages=list(messages), tree_of=tree_of, queues=queues)


def _tree_structure(trees: TreePacking):
    nodes = {}
    adj = {}
    for tree in trees.trees:
        vs = tree.vertex_set()
        nodes[tree.id] = vs
        a = {v: [] for v in vs}
        for u, v in tree.edges:
            a[u].append(v)
            a[v].append(u)
        adj[tree.id] = a
    return nodes, adj


def gossip(
    g: Graph,
    packing,
    messages,
    cfg: SimConfig | None = None,
    seed: int = 0,
) -> tuple[dict, Transcript]:
    """Broadcast every message to every node; returns (delivery map, transcript).

    `packing` is a TreePacking or anything with a `.trees` TreePacking.
    `messages` is a list of (origin node, message id) pairs with distinct ids.
    """
    if cfg is None:
        cfg = SimConfig()
    trees = packing if isinstance(packing, TreePacking) else packing.trees
    if not trees.trees:
        raise GossipError("packing has no trees")
    tree_nodes, tree_adj = _tree_structure(trees)
    plan = make_gossip_plan(messages, list(tree_nodes), seed if cfg.seed == 0 else cfg.seed)
    n = g.n
    ids = [mid for _o, mid in messages]
    if len(set(ids)) != len(ids):
        raise GossipError("message ids must be distinct")
    budget = cfg.budget(max(n, len(ids) + 1))
    bits = id_bits(max(len(ids), 2)) + id_bits(max(len(tree_nodes), 2))
    tr = Transcript(seed=cfg.seed)

    delivered = [set() for _ in range(n)]
    # tree-local knowledge and per-node forwarding history; members accept a
    # message only from a tree neighbor, so in-tree dissemination is the
    # pipelined hop-by-hop broadcast and not an overheard shortcut
    known: dict = {tid: {v: [] for v in tree_nodes[tid]} for tid in tree_nodes}
    fwd_count: dict = {tid: {v: 0 for v in tree_nodes[tid]} for tid in tree_nodes}

    for origin, mid in messages:
        delivered[origin].add(mid)

    # injection: each origin hands one message per round to its attachment
    # point in the message's tree (domination guarantees one exists)
    by_origin: dict = {}
    for origin, mid in messages:
        by_origin.setdefault(origin, []).append(mid)
    eta = max((len(v) for v in by_origin.values()), default=0)
    for slot in range(eta):
        for origin, mids in by_origin.items():
            if slot >= len(mids):
                continue
            mid = mids[slot]
            tid = plan.tree_of[mid]
            att = _attach(g, tree_nodes[tid], origin)
            delivered[att].add(mid)
            if mid not in known[tid][att]:
                known[tid][att].append(mid)
        tr.record_round(bits, budget)

    trees_of_node = [sorted(tid for tid in tree_nodes if v in tree_nodes[tid]) for v in range(n)]
    want = set(ids)
    pending = sum(1 for v in range(n) if not want <= delivered[v])

    round_no = 0
    while pending > 0:
        if tr.rounds_used >= cfg.round_cap:
            raise GossipError(f"round cap {cfg.round_cap} exceeded before completion")
        sends = []
        for v in range(n):
            tids = trees_of_node[v]
            if not tids:
                continue
            # round-robin fairness over this node's trees, skipping trees
            # with nothing left to forward
            for off in range(len(tids)):
                tid = tids[(round_no + off) % len(tids)]
                k = fwd_count[tid][v]
                if k < len(known[tid][v]):
                    sends.append((v, tid, known[tid][v][k]))
                    fwd_count[tid][v] = k + 1
                    break
        round_no += 1
        tr.record_round(bits if sends else 0, budget)
        if not sends:
            # nothing in flight anywhere, yet some node lacks a message
            missing = next(v for v in range(n) if not want <= delivered[v])
            raise GossipError(f"gossip stalled; node {missing} incomplete")
        for v, tid, mid in sends:
            for w in g.adjacency[v]:
                if w in tree_nodes[tid]:
                    if w in tree_adj[tid][v] and mid not in known[tid][w]:
                        known[tid][w].append(mid)
                        delivered[w].add(mid)
                else:
                    delivered[w].add(mid)
        pending = sum(1 for v in range(n) if not want <= delivered[v])

    delivery = {v: sorted(delivered[v]) for v in range(n)}
    return delivery, tr


def _tree_path(adj: dict, src: int, dst: int) -> list:
    """Vertex path between two members of one tree."""
    prev = {src: src}
    q = deque([src])
    while q:
        u = q.popleft()
        if u == dst:
            break
        for w in adj[u]:
            if w not in prev:
                prev[w] = u
                q.append(w)
    if dst not in prev:
        raise GossipError(f"no tree path between {src} and {dst}")
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def _attach(g: Graph, members: set, v: int) -> int:
    """v itself if in the tree, else its smallest tree-member neighbor."""
    if v in members:
        return v
    for u in g.adjacency[v]:
        if u in members:
            return u
    raise GossipError(f"node {v} has no neighbor in the chosen tree")


def congestion_report(g: Graph, packing, demands, seed: int = 0, broadcast: bool = False) -> dict:
    """Vertex and edge congestion of random-tree routing.

    `demands` is a list of (src, dst) pairs, or with `broadcast=True` a
    list of origin nodes whose messages traverse their whole tree. Reports
    max and mean loads plus the ratio to the demands/trees lower bound.
    """
    trees = packing if isinstance(packing, TreePacking) else packing.trees
    if not trees.trees:
        raise GossipError("packing has no trees")
    tree_nodes, tree_adj = _tree_structure(trees)
    tids = sorted(tree_nodes)
    r = rnglib.stream(seed, "congestion")
    vload = [0] * g.n
    eload: dict = {}

    def hit_edge(u, w):
        e = (u, w) if u < w else (w, u)
        eload[e] = eload.get(e, 0) + 1

    for demand in demands:
        tid = tids[r.randrange(len(tids))]
        members = tree_nodes[tid]
        if broadcast:
            for v in members:
                vload[v] += 1
            for tree in trees.trees:
                if tree.id == tid:
                    for u, w in tree.edges:
                        hit_edge(u, w)
        else:
            src, dst = demand
            a, b = _attach(g, members, src), _attach(g, members, dst)
            path = _tree_path(tree_adj[tid], a, b)
            if a != src:
                vload[src] += 1
                hit_edge(src, a)
            if b != dst:
                vload[dst] += 1
                hit_edge(dst, b)
            for v in path:
                vload[v] += 1
            for u, w in zip(path, path[1:]):
                hit_edge(u, w)

    n_demands = len(list(demands))
    max_v = max(vload, default=0)
    lower = n_demands / max(len(tids), 1)
    return {
        "demands": n_demands,
        "trees": len(tids),
        "max_vertex_congestion": max_v,
        "mean_vertex_congestion": (sum(vload) / g.n) if g.n else 0.0,
        "max_edge_congestion": max(eload.values(), default=0),
        "mean_edge_congestion": (sum(eload.values()) / len(eload)) if eload else 0.0,
        "ratio_to_lower_bound": (max_v / lower) if lower > 0 else 0.0,
    }
