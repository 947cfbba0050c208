"""Fractional spanning-tree packing by multiplicative-weights MST iteration.

Small edge connectivity is handled directly: keep a tree collection with
total weight 1, price each edge at exp(alpha * z_e) where z_e is the
(rounded) scaled load, repeatedly add the cheapest spanning tree with
weight beta until the MST is no longer substantially cheaper than the
average tree. At termination max z_e <= 1 + 6*eps, so scaling all weights
by ceil((lambda-1)/2) / (1 + 6*eps) keeps every edge load at most 1.

Large edge connectivity is reduced to the small case by a uniform random
eta-way edge partition; each subgraph keeps about lambda/eta of the
connectivity, is packed independently, and the unions of trees never share
an edge across subgraphs.

All cost arithmetic stays in the log domain: exp(alpha * z) overflows
doubles long before the iteration finishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an optional accelerator
    njit = None

from . import rng as rnglib
from .graph import Graph, diameter, log_star
from .oracles import edge_connectivity
from .packing import TreePacking, WeightedTree

WEIGHT_TOL = 1e-9


class StPackError(RuntimeError):
    """Disconnected input or iteration cap hit with the load bound violated."""


def mw_alpha(m: int, eps: float) -> int:
    return math.ceil((2.0 / eps) * math.log(2.0 * m / eps))


def mw_beta(alpha: int, n: int) -> float:
    return 1.0 / (4.0 * alpha * math.ceil(math.log(max(n, 2))))


def iteration_cap(n: int, m: int, eps: float, target: int) -> int:
    return math.ceil((math.log(max(n, 2)) / eps) * (mw_alpha(m, eps) * max(target, 1) + math.log(max(m, 2)))) + 1


@dataclass
class StPackingState:
    """Final state of one MST-iteration run on a (sub)graph."""

    graph: Graph
    lam: int
    epsilon: float
    alpha: int
    beta: float
    iterations: int
    trees: list  # (edge index tuple, weight); weights sum to 1
    x: np.ndarray  # per-edge load, indexed like graph.edges()
    max_z: float
    terminated: bool  # True if the cost test fired before the cap
    potential_log: list = field(default_factory=list)  # log sum of costs per iteration

    @property
    def edge_list(self) -> list:
        return self.graph.edges()

    def total_weight(self) -> float:
        return sum(w for _, w in self.trees)


def _logsumexp(a: np.ndarray) -> float:
    """Max-shifted log-sum-exp on a small dense array."""
    hi = a.max()
    return float(hi + math.log(np.exp(a - hi).sum()))


def _rounded_z(x: np.ndarray, target: int, n: int) -> np.ndarray:
    """z_e = x_e * target, rounded to multiples of 1/n."""
    return np.round(x * target * n) / n


def _kruskal_scan(order, src, dst, n, out):
    """Kruskal over a fixed edge order; fills `out` with picked edge indices
    and returns how many were picked. Plain enough for numba to compile."""
    parent = np.arange(n)
    need = n - 1
    k = 0
    for t in range(order.shape[0]):
        idx = order[t]
        u = src[idx]
        v = dst[idx]
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        if u != v:
            parent[u] = v
            out[k] = idx
            k += 1
            if k == need:
                break
    return k


if njit is not None:
    _kruskal_scan = njit(cache=True)(_kruskal_scan)


class _MstSolver:
    """Repeated MSTs on a fixed edge set with canonical tie-breaking.

    Kruskal over the caller's sort order with an inlined union-find; ties
    resolve by position in the order, i.e. by edge index for a stable
    argsort. The scan kernel is numba-compiled when available, falling back
    to the identical pure-Python loop otherwise.
    """

    def __init__(self, esrc, edst, n: int):
        self.n = n
        self.m = len(esrc)
        self._src = np.asarray(esrc, dtype=np.int64)
        self._dst = np.asarray(edst, dtype=np.int64)
        self._out = np.empty(max(n - 1, 0), dtype=np.int64)

    def tree(self, order) -> np.ndarray:
        """Edge indices of the MST under the cost order `order` (argsort)."""
        if self.n <= 1:
            return np.empty(0, dtype=np.int64)
        order = np.ascontiguousarray(order, dtype=np.int64)
        k = _kruskal_scan(order, self._src, self._dst, self.n, self._out)
        if k != self.n - 1:
            raise StPackError("graph is disconnected; no spanning tree exists")
        return np.sort(self._out[:k])


def st_pack_small(g: Graph, lam_sub: int, eps: float, seed: int = 0) -> StPackingState:
    """MST-iteration packing for one graph with edge connectivity lam_sub.

    The returned state always satisfies max z_e <= 1 + 6*eps; hitting the
    iteration cap without that bound raises StPackError (parameter
    misconfiguration).
    """
    if lam_sub < 1:
        raise StPackError(f"lam_sub must be >= 1, got {lam_sub}")
    if not 0 < eps < 1:
        raise StPackError(f"eps must be in (0,1), got {eps}")
    n, m = g.n, g.m
    edges = g.edges()
    if n > 1 and m == 0:
        raise StPackError("graph is disconnected; no spanning tree exists")
    esrc = np.array([e[0] for e in edges], dtype=np.int64)
    edst = np.array([e[1] for e in edges], dtype=np.int64)
    target = math.ceil((lam_sub - 1) / 2)
    alpha = mw_alpha(max(m, 1), eps)
    beta = mw_beta(alpha, n)
    cap = iteration_cap(n, max(m, 1), eps, target)

    # initial tree: MST under uniform costs (canonical edge order ties)
    # weights are stored unscaled; `scale` carries the accumulated (1-beta)
    # factors so old trees never need individual updates
    solver = _MstSolver(esrc, edst, n) if m else None
    first = solver.tree(np.arange(m)) if solver else np.empty(0, dtype=np.int64)
    # tree keys are the raw bytes of the sorted int64 edge-index array;
    # decoded back to tuples once at the end
    weights: dict = {first.tobytes(): 1.0}
    scale = 1.0
    x = np.zeros(m)
    x[first] = 1.0

    iterations = 0
    terminated = False
    potential_log: list = []
    log1me = math.log(1.0 - eps)
    r = 1.0 - beta

    # the dynamics revisit the same rounded z vectors constantly (the MST
    # oscillates among a few trees near a load equilibrium), so everything
    # derived from z alone is memoized: the chosen tree, its log cost, the
    # log potential, and exp(logc - hi) so the weighted average cost
    # log(sum_e c_e x_e) = hi + log(x . expc) is a dot product (x <= 1
    # everywhere, so the shifted sum cannot overflow or lose the maximum)
    z_cache: dict = {}
    tn = float(target * n)
    while iterations < cap and m > 0:
        zint = np.rint(x * tn).astype(np.int64)
        zkey = zint.tobytes()
        hit = z_cache.get(zkey)
        seen = hit is not None
        if not seen:
            logc = (alpha / n) * zint  # log of cost exp(alpha z)
            order = np.argsort(zint, kind="stable")  # ties resolved by edge index
            tree = solver.tree(order)
            tree_ind = np.zeros(m)
            tree_ind[tree] = 1.0
            hi = float(logc.max())
            expc = np.exp(logc - hi)
            hit = (
                tree.tobytes(),
                tree_ind,
                hi + math.log(float(expc[tree].sum())),
                hi + math.log(float(expc.sum())),
                hi,
                expc,
            )
            if len(z_cache) >= 512:
                z_cache.clear()
            z_cache[zkey] = hit
        key, tree_ind, log_mst_cost, potential, hi, expc = hit
        potential_log.append(potential)
        if log_mst_cost > log1me + hi + math.log(float(x @ expc)):
            terminated = True
            break
        # Repeating this iteration s times has the closed form
        # x_s = r^s x + (1 - r^s) 1_tree; as long as the rounded z is
        # unchanged the MST and costs are identical, so we advance by the
        # longest such run in one step. Both "z changed" and "the
        # termination test fires" are monotone in s, so a galloping search
        # finds the run length without altering the computed sequence. The
        # search only runs on a cached z: a fresh z advances one plain step
        # and re-enters the loop as a cache hit if it turns out to repeat,
        # so single-shot z vectors never pay for the probe.
        remaining = cap - iterations
        s = 1
        if seen and remaining > 1:

            def repeat_ok(step: int) -> bool:
                # can the next step start as an exact repeat of this one?
                rs = r**step
                xs = rs * x + (1.0 - rs) * tree_ind
                if not np.array_equal(np.rint(xs * tn).astype(np.int64), zint):
                    return False
                return log_mst_cost <= log1me + hi + math.log(float(xs @ expc))

            if repeat_ok(1):
                good = 1  # largest j known with repeat_ok(j)
                bad = None
                probe = 2
                while probe <= remaining - 1:
                    if repeat_ok(probe):
                        good = probe
                        probe *= 2
                    else:
                        bad = probe
                        break
                if bad is None:
                    bad = remaining  # f(remaining - 1) may still hold; search covers it
                lo, hi2 = good, min(bad, remaining - 1)
                while lo < hi2:
                    mid = (lo + hi2 + 1) // 2
                    if repeat_ok(mid):
                        lo = mid
                    else:
                        hi2 = mid - 1
                s = lo + 1
        rs = r**s
        weights[key] = weights.get(key, 0.0) + (1.0 / rs - 1.0) / scale
        scale *= rs
        x = rs * x + (1.0 - rs) * tree_ind
        iterations += s

    max_z = float(_rounded_z(x, target, n).max()) if m else 0.0
    if max_z > 1.0 + 6.0 * eps + WEIGHT_TOL:
        raise StPackError(
            f"iteration cap {cap} reached with max z {max_z:.6f} > 1+6*eps"
        )
    total = sum(w * scale for w in weights.values())
    if abs(total - 1.0) > 1e-6:
        raise StPackError(f"tree weights sum to {total}, expected 1")
    # renormalize the float drift away and decode the byte keys
    trees = [
        (tuple(np.frombuffer(kb, dtype=np.int64).tolist()), w * scale / total)
        for kb, w in weights.items()
    ]
    trees.sort()
    return StPackingState(
        graph=g,
        lam=lam_sub,
        epsilon=eps,
        alpha=alpha,
        beta=beta,
        iterations=iterations,
        trees=trees,
        x=x,
        max_z=max_z,
        terminated=terminated,
        potential_log=potential_log,
    )


def scale_packing(state: StPackingState, lam_sub: int, eps: float, id_base: int = 0) -> TreePacking:
    """Scale weights by ceil((lam_sub-1)/2)/(1+6*eps) so edge loads are <= 1."""
    if state.max_z > 1.0 + 6.0 * eps + WEIGHT_TOL:
        raise StPackError(f"max z {state.max_z} violates the 1+6*eps bound")
    target = math.ceil((lam_sub - 1) / 2)
    factor = target / (1.0 + 6.0 * eps)
    edges = state.edge_list
    out = []
    for j, (key, w) in enumerate(state.trees):
        if w * factor <= 0.0:
            continue
        # edge-index keys are ascending and edges() is lexicographic, so the
        # mapped list is already sorted
        tree_edges = [edges[idx] for idx in key]
        vertices = [] if tree_edges else list(range(state.graph.n))
        out.append(WeightedTree(id=id_base + j, weight=w * factor, edges=tree_edges, vertices=vertices))
    return TreePacking(trees=out)


@dataclass
class EdgePartition:
    eta: int
    assignment: dict  # canonical edge -> subgraph index
    subgraphs: list  # Graph views, all on the same vertex set


def edge_partition(g: Graph, eta: int, seed: int) -> EdgePartition:
    """Uniform independent edge assignment into eta subgraphs."""
    if eta < 1:
        raise StPackError(f"eta must be >= 1, got {eta}")
    edges = g.edges()
    if eta == 1:
        return EdgePartition(eta=1, assignment={e: 0 for e in edges}, subgraphs=[g])
    draws = rnglib.np_stream(seed, "edge-partition", eta).integers(0, eta, size=len(edges))
    assignment = {e: int(d) for e, d in zip(edges, draws)}
    buckets = [[] for _ in range(eta)]
    for e, d in zip(edges, draws):
        buckets[d].append(e)
    subgraphs = [Graph.from_edges(g.n, b) for b in buckets]
    return EdgePartition(eta=eta, assignment=assignment, subgraphs=subgraphs)


def choose_eta(lam_approx: float, n: int, eps: float) -> int:
    """eta = max(1, floor(lam * eps^2 / (30 ln n))), 1 below the threshold."""
    ln_n = math.log(max(n, 2))
    if lam_approx <= 100.0 * ln_n / (eps * eps):
        return 1
    return max(1, math.floor(lam_approx * eps * eps / (30.0 * ln_n)))


@dataclass
class StPacking:
    """Union of the per-subgraph scaled packings plus run metadata."""

    trees: TreePacking
    lambda_used: int
    eta: int
    epsilon: float
    subgraph_stats: list  # per subgraph: dict(lam, alpha, beta, iterations, max_z)

    @property
    def total_weight(self) -> float:
        return self.trees.total_weight

    def to_json(self) -> dict:
        d = self.trees.to_json()
        d.update(
            {
                "lambda_used": self.lambda_used,
                "eta": self.eta,
                "epsilon": self.epsilon,
                "subgraphs": self.subgraph_stats,
            }
        )
        return d


def st_pack_general(g: Graph, eps: float, seed: int = 0, lam_oracle=None) -> StPacking:
    """Partition if the connectivity warrants it, pack each part, union all.

    `lam_oracle(graph) -> int` defaults to the exact edge-connectivity
    oracle; a distributed approximator can be slotted in instead.
    """
    if lam_oracle is None:
        lam_oracle = edge_connectivity
    if not g.is_connected():
        raise StPackError("input graph must be connected")
    if g.n == 1:
        tree = WeightedTree(id=0, weight=1.0, edges=[], vertices=[0])
        return StPacking(
            trees=TreePacking(trees=[tree]),
            lambda_used=0,
            eta=1,
            epsilon=eps,
            subgraph_stats=[],
        )
    lam = lam_oracle(g)
    eta = choose_eta(lam, g.n, eps)
    part = edge_partition(g, eta, seed)
    all_trees = []
    stats = []
    for idx, sub in enumerate(part.subgraphs):
        lam_i = lam_oracle(sub)
        if lam_i < 1:
            stats.append({"lam": 0, "alpha": 0, "beta": 0.0, "iterations": 0, "max_z": 0.0})
            continue
        state = st_pack_small(sub, lam_i, eps, seed=rnglib.derive_seed(seed, "sub", idx))
        scaled = scale_packing(state, lam_i, eps, id_base=len(all_trees))
        all_trees.extend(scaled.trees)
        stats.append(
            {
                "lam": lam_i,
                "alpha": state.alpha,
                "beta": state.beta,
                "iterations": state.iterations,
                "max_z": state.max_z,
            }
        )
    for j, tree in enumerate(all_trees):
        tree.id = j
    return StPacking(
        trees=TreePacking(trees=all_trees),
        lambda_used=lam,
        eta=eta,
        epsilon=eps,
        subgraph_stats=stats,
    )


def st_pack_distributed_cost_model(g: Graph, eps: float, lam: int | None = None) -> int:
    """Charged-round estimate: iteration cap times the per-MST round cost
    D + ceil(sqrt(n * eta)) * log*(n), with the pipelined partition width."""
    if lam is None:
        lam = edge_connectivity(g)
    n = g.n
    d = diameter(g)
    d = 0 if d == math.inf else int(d)
    eta = choose_eta(lam, n, eps)
    lam_sub = max(1, round(lam / eta))
    target = math.ceil((lam_sub - 1) / 2)
    iters = iteration_cap(n, max(g.m, 1), eps, target)
    per_mst = d + math.ceil(math.sqrt(n * eta)) * log_star(n)
    return iters * per_mst
