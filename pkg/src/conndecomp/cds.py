"""Fractional dominating-tree packing via recursive class assignment.

Each real node hosts 3L virtual nodes indexed by (layer, type). Virtual
nodes are split into t classes; base layers at random, later layers by a
maximal matching in a bridging graph that merges the connected components
of each class. Each class that ends up a connected dominating set yields
one dominating tree of weight 1/(3L).

Representation note: virtual nodes at the same real node are pairwise
adjacent, so the connected components of class i in the virtual graph are
exactly the components of the subgraph induced by the class's real-node
support. All component bookkeeping therefore runs on one union-find anchor
per (class, real node), never on materialized virtual edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _sp_components

from . import rng as rnglib
from .graph import Graph, UnionFind, diameter, log_star
from .packing import TreePacking, WeightedTree
from .sim import SimConfig, Transcript, default_budget, id_bits


class CdsError(RuntimeError):
    """A class ended up empty or disconnected, or parameters are invalid."""


def default_layer_count(n: int) -> int:
    """L = 2 * max(4, ceil(4 * log2 n)); always even."""
    return 2 * max(4, math.ceil(4 * math.log2(max(n, 2))))


def choose_class_count(k_guess: int, n: int, t_factor: float = 0.25) -> int:
    """t = max(1, floor(k_guess * t_factor)), with a small-k fallback to 1.

    The merging analysis needs k to exceed the layer scale; below
    4*ceil(log2 n) a single class is the right answer.
    """
    if k_guess < 1:
        raise CdsError(f"k_guess must be >= 1, got {k_guess}")
    if k_guess < 4 * math.ceil(math.log2(max(n, 2))):
        return 1
    return max(1, math.floor(k_guess * t_factor))


@dataclass(frozen=True)
class VirtualGraph:
    """3L virtual copies of each real node, indexed (v, layer, type).

    Two distinct virtual nodes are adjacent iff they sit on the same real
    node or on adjacent real nodes. Layers run 1..L, types 1..3.
    """

    base: Graph
    L: int

    @property
    def num_virtual(self) -> int:
        return 3 * self.L * self.base.n

    def virtual_nodes(self):
        for v in range(self.base.n):
            for layer in range(1, self.L + 1):
                for typ in (1, 2, 3):
                    yield (v, layer, typ)

    def are_adjacent(self, a, b) -> bool:
        if a == b:
            return False
        return a[0] == b[0] or self.base.has_edge(*sorted((a[0], b[0])))

    def virtual_edge_count(self) -> int:
        c = 3 * self.L
        return c * (c - 1) // 2 * self.base.n + c * c * self.base.m


def build_virtual_graph(g: Graph, L: int) -> VirtualGraph:
    if L < 2 or L % 2 != 0:
        raise CdsError(f"L must be even and >= 2, got {L}")
    return VirtualGraph(base=g, L=L)


class ClassAssignment:
    """Class labels for all virtual nodes plus per-class component tracking.

    `cls[layer-1, type-1, v]` is the 0-based class of a virtual node, -1
    while unassigned. `member[i]` is the boolean real-node support of class
    i over layers processed so far. `m_history` records (layer, M) where M
    is the total excess component count across classes.
    """

    def __init__(self, vg: VirtualGraph, t: int):
        if t < 1:
            raise CdsError(f"need t >= 1, got {t}")
        g = vg.base
        self.vg = vg
        self.t = t
        self.n = g.n
        self.cls = np.full((vg.L, 3, g.n), -1, dtype=np.int32)
        self.member = [np.zeros(g.n, dtype=bool) for _ in range(t)]
        self.anchor = [np.full(g.n, -1, dtype=np.int64) for _ in range(t)]
        self.uf = UnionFind(0)
        self.comp_count = [0] * t
        self.m_history: list = []
        self.processed_layer = 0  # all layers <= this are assigned
        self.pending = None  # draws for the layer being processed
        self._labels_cache: dict = {}
        # directed edge arrays with self-loops, for closed-neighborhood scans
        srcs, dsts = [], []
        for u in range(g.n):
            srcs.append(u)
            dsts.append(u)
            for w in g.adjacency[u]:
                srcs.append(u)
                dsts.append(w)
        self._esrc = np.array(srcs, dtype=np.int64)
        self._edst = np.array(dsts, dtype=np.int64)
        data = np.ones(len(srcs), dtype=np.int8)
        self._csr = csr_matrix((data, (self._esrc, self._edst)), shape=(g.n, g.n))

    # -- component bookkeeping -------------------------------------------

    def add_member(self, i: int, v: int) -> bool:
        """Record that real node v now supports class i; returns True if new."""
        if self.member[i][v]:
            return False
        x = self.uf.add()
        self.anchor[i][v] = x
        self.member[i][v] = True
        self.comp_count[i] += 1
        for u in self.vg.base.adjacency[v]:
            if self.member[i][u] and self.uf.union(x, self.anchor[i][u]):
                self.comp_count[i] -= 1
        self._labels_cache.pop(i, None)
        return True

    def labels(self, i: int) -> np.ndarray:
        """Per-real-node component label for class i (anchor root, -1 outside)."""
        cached = self._labels_cache.get(i)
        if cached is not None:
            return cached
        arr = np.full(self.n, -1, dtype=np.int64)
        anchor = self.anchor[i]
        find = self.uf.find
        for v in np.nonzero(self.member[i])[0]:
            arr[v] = find(anchor[v])
        self._labels_cache[i] = arr
        return arr

    @property
    def excess_components(self) -> int:
        return sum(max(c - 1, 0) for c in self.comp_count)

    def record_m(self, layer: int) -> None:
        self.m_history.append((layer, self.excess_components))

    def class_members(self, i: int) -> list:
        return [int(v) for v in np.nonzero(self.member[i])[0]]

    def class_counts(self) -> np.ndarray:
        """(t, n) matrix: virtual nodes of real node v assigned to class i."""
        out = np.zeros((self.t, self.n), dtype=np.int64)
        flat = self.cls.reshape(-1, self.n)
        for row in flat:
            mask = row >= 0
            np.add.at(out, (row[mask], np.nonzero(mask)[0]), 1)
        return out

    def virtual_class_sizes(self) -> list:
        return [int((self.cls == i).sum()) for i in range(self.t)]

    def largest_component_size(self) -> int:
        best = 1
        for i in range(self.t):
            lab = self.labels(i)
            lab = lab[lab >= 0]
            if lab.size:
                best = max(best, int(np.bincount(lab).max()))
        return best

    def class_adjacency(self, i: int) -> dict:
        """node -> tuple of class-i component labels in its closed neighborhood."""
        lab = self.labels(i)
        d = lab[self._edst]
        mask = d >= 0
        if not mask.any():
            return {}
        s = self._esrc[mask]
        d = d[mask]
        big = int(d.max()) + 1
        uniq = np.unique(s * big + d)
        nodes = (uniq // big).astype(np.int64)
        comps = (uniq % big).astype(np.int64)
        out: dict = {}
        starts = np.searchsorted(nodes, np.unique(nodes))
        boundaries = list(starts) + [len(nodes)]
        for a, b in zip(boundaries[:-1], boundaries[1:]):
            out[int(nodes[a])] = tuple(int(c) for c in comps[a:b])
        return out


def assign_base_layers(vg: VirtualGraph, t: int, seed: int) -> ClassAssignment:
    """Uniformly random classes for all virtual nodes of layers 1..L/2."""
    ca = ClassAssignment(vg, t)
    half = vg.L // 2
    draws = rnglib.np_stream(seed, "base").integers(0, t, size=(half, 3, vg.base.n))
    ca.cls[:half] = draws
    for i in range(t):
        mask = (draws == i).any(axis=(0, 1))
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            continue
        for v in idx:
            x = ca.uf.add()
            ca.anchor[i][v] = x
        ca.member[i][:] = mask
        sub = ca._csr[idx][:, idx]
        ncomp, lab = _sp_components(sub, directed=False)
        ca.comp_count[i] = int(ncomp)
        first = {}
        for pos, comp in enumerate(lab):
            v = int(idx[pos])
            if comp in first:
                ca.uf.union(ca.anchor[i][first[comp]], ca.anchor[i][v])
            else:
                first[comp] = v
    ca.processed_layer = half
    ca.record_m(half)
    return ca


@dataclass
class BridgingGraph:
    """Bipartite graph between old-node class components and type-2 new nodes.

    Components are keyed (class, component label). `edges[v]` lists the
    candidate components for type-2 new node v, in deterministic order.
    """

    layer: int  # the new layer being assigned
    edges: dict  # v -> list of (class, comp)
    deactivated: set  # (class, comp) pairs excluded by type-1 connectors
    components: set  # all (class, comp) pairs of classes with >= 2 components

    def size(self) -> int:
        return len(self.components) + len(self.edges)


def draw_new_layer(ca: ClassAssignment, ell: int, seed: int) -> None:
    """Random class draws for layer ell+1: types 1 and 3 now, the type-2
    fallback reserved for unmatched nodes."""
    r = rnglib.np_stream(seed, "layer", ell + 1)
    ca.pending = {
        "layer": ell + 1,
        "type1": r.integers(0, ca.t, ca.n),
        "type3": r.integers(0, ca.t, ca.n),
        "fallback": r.integers(0, ca.t, ca.n),
    }


def build_bridging_graph(vg: VirtualGraph, ca: ClassAssignment, ell: int) -> BridgingGraph:
    """Bridging graph for assigning layer ell+1, per the three conditions:

    (a) the type-2 node has a virtual neighbor in the component;
    (b) the component was not already bridged by a type-1 new node of its
        class that also neighbors a different component (deactivation);
    (c) some type-3 new neighbor of the node joined the class and neighbors
        a component of that class other than the candidate.
    """
    if ca.pending is None or ca.pending["layer"] != ell + 1:
        raise CdsError("draw_new_layer must run before build_bridging_graph")
    t1 = ca.pending["type1"]
    t3 = ca.pending["type3"]
    g = vg.base

    interesting = [i for i in range(ca.t) if ca.comp_count[i] >= 2]
    components: set = set()
    deactivated: set = set()
    adj = {}
    for i in interesting:
        adj[i] = ca.class_adjacency(i)
        lab = ca.labels(i)
        components.update((i, int(c)) for c in np.unique(lab[lab >= 0]))

    # condition (b): type-1 connectors deactivate every component they bridge
    for i in interesting:
        for u in np.nonzero(t1 == i)[0]:
            comps = adj[i].get(int(u), ())
            if len(comps) >= 2:
                deactivated.update((i, c) for c in comps)

    # condition (c): per type-2 node and class, union of the "suitable
    # component" sets of its type-3 new neighbors that joined the class
    potential: dict = {}
    for i in interesting:
        for w in np.nonzero(t3 == i)[0]:
            suitable = adj[i].get(int(w), ())
            if not suitable:
                continue
            for x in (int(w), *g.adjacency[int(w)]):
                potential.setdefault(x, {}).setdefault(i, set()).update(suitable)

    edges: dict = {}
    for v in range(g.n):
        cand = []
        for i, targets in sorted(potential.get(v, {}).items()):
            for comp in adj[i].get(v, ()):
                if (i, comp) in deactivated:
                    continue
                if targets - {comp}:
                    cand.append((i, comp))
        if cand:
            edges[v] = sorted(cand)
    return BridgingGraph(layer=ell + 1, edges=edges, deactivated=deactivated, components=components)


def greedy_matching(bg: BridgingGraph) -> dict:
    """Sequential maximal matching: scan type-2 nodes in id order, take the
    first unmatched candidate component."""
    matched_comp: set = set()
    matching: dict = {}
    for v in sorted(bg.edges):
        for key in bg.edges[v]:
            if key not in matched_comp:
                matching[v] = key
                matched_comp.add(key)
                break
    return matching


def luby_matching_distributed(
    bg: BridgingGraph, seed: int, stages: int, value_bits: int = 32, on_stage=None
) -> dict:
    """Randomized proposal/accept matching, maximal w.h.p. after O(log) stages.

    Per stage every unmatched node draws a `value_bits`-bit value per
    remaining candidate, proposes to its maximum, and each component
    accepts its maximum proposal (ties by proposer id); accepted components
    leave all candidate lists. `on_stage(bits)` reports the proposal
    message size once per executed stage.
    """
    r = rnglib.stream(seed, "luby", bg.layer)
    nlist = {v: list(c) for v, c in bg.edges.items()}
    matching: dict = {}
    matched_comp: set = set()
    for _stage in range(stages):
        unmatched = [v for v in sorted(nlist) if v not in matching and nlist[v]]
        if not unmatched:
            break
        proposals: dict = {}
        for v in unmatched:
            best = None
            for key in nlist[v]:
                val = r.getrandbits(value_bits)
                if best is None or (val, key) > best[0]:
                    best = ((val, key), key, val)
            _, key, val = best
            cur = proposals.get(key)
            if cur is None or (val, v) > cur:
                proposals[key] = (val, v)
        if on_stage is not None:
            on_stage(value_bits + 2 * id_bits(len(bg.components) + len(bg.edges) + 2))
        for key, (_val, v) in sorted(proposals.items()):
            matching[v] = key
            matched_comp.add(key)
        for v in list(nlist):
            nlist[v] = [k for k in nlist[v] if k not in matched_comp]
    return matching


def _register_layer(ca: ClassAssignment, ell: int, assign1, assign2, assign3) -> None:
    """Commit the class choices of layer ell+1 into the support structure."""
    ca.cls[ell, 0] = assign1
    ca.cls[ell, 1] = assign2
    ca.cls[ell, 2] = assign3
    for arr in (assign1, assign2, assign3):
        for v in range(ca.n):
            ca.add_member(int(arr[v]), v)
    ca.pending = None
    ca.processed_layer = ell + 1
    ca.record_m(ell + 1)


def process_layer_centralized(vg: VirtualGraph, ca: ClassAssignment, ell: int, seed: int) -> ClassAssignment:
    """Assign layer ell+1: random types 1/3, matched type-2, random leftovers."""
    if not vg.L // 2 <= ell <= vg.L - 1:
        raise CdsError(f"layer index {ell} outside [L/2, L-1]")
    if ca.processed_layer != ell:
        raise CdsError(f"layers up to {ca.processed_layer} assigned; cannot process {ell}")
    draw_new_layer(ca, ell, seed)
    bg = build_bridging_graph(vg, ca, ell)
    matching = greedy_matching(bg)
    assign2 = ca.pending["fallback"].copy()
    for v, (i, _comp) in matching.items():
        assign2[v] = i
    _register_layer(ca, ell, ca.pending["type1"], assign2, ca.pending["type3"])
    return ca


def extract_trees(vg: VirtualGraph, ca: ClassAssignment) -> TreePacking:
    """One dominating tree per class: a spanning tree of the class support.

    Equivalent to keeping the 0-weight edges of a virtual-graph MST where
    same-class edges cost 0, projected to real nodes. Weight 1/(3L) each.
    """
    g = vg.base
    weight = 1.0 / (3 * vg.L)
    trees = []
    for i in range(ca.t):
        members = ca.class_members(i)
        if not members:
            raise CdsError(f"class {i} is empty")
        if ca.comp_count[i] != 1:
            raise CdsError(f"class {i} is disconnected ({ca.comp_count[i]} components)")
        member_set = set(members)
        root = members[0]
        seen = {root}
        frontier = [root]
        edges = []
        while frontier:
            nxt = []
            for u in frontier:
                for w in g.adjacency[u]:
                    if w in member_set and w not in seen:
                        seen.add(w)
                        edges.append((u, w) if u < w else (w, u))
                        nxt.append(w)
            frontier = nxt
        trees.append(
            WeightedTree(id=i, weight=weight, edges=sorted(edges), vertices=[] if edges else [root])
        )
    return TreePacking(trees=trees)


@dataclass
class CdsPacking:
    t: int
    L: int
    classes: list  # per class, sorted real node ids
    trees: TreePacking
    m_history: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "L": self.L,
            "classes": [list(c) for c in self.classes],
            "trees": self.trees.to_json(),
            "m_history": [list(x) for x in self.m_history],
        }

    @staticmethod
    def from_json(d: dict) -> "CdsPacking":
        return CdsPacking(
            t=int(d["t"]),
            L=int(d["L"]),
            classes=[[int(v) for v in c] for c in d["classes"]],
            trees=TreePacking.from_json(d["trees"]),
            m_history=[tuple(x) for x in d["m_history"]],
        )


def _finish_packing(vg: VirtualGraph, ca: ClassAssignment) -> CdsPacking:
    trees = extract_trees(vg, ca)
    return CdsPacking(
        t=ca.t,
        L=vg.L,
        classes=[ca.class_members(i) for i in range(ca.t)],
        trees=trees,
        m_history=list(ca.m_history),
    )


def cds_pack_centralized(
    g: Graph,
    k_guess: int,
    L: int | None = None,
    t_factor: float = 0.25,
    seed: int = 0,
    t: int | None = None,
) -> CdsPacking:
    """Full centralized pipeline. Raises CdsError if some class fails to
    connect (improbable at the default parameters; callers treat it as a
    failed run)."""
    if not g.is_connected():
        raise CdsError("input graph must be connected")
    if L is None:
        L = default_layer_count(g.n)
    if t is None:
        t = choose_class_count(k_guess, g.n, t_factor)
    vg = build_virtual_graph(g, L)
    ca = assign_base_layers(vg, t, seed)
    for ell in range(L // 2, L):
        process_layer_centralized(vg, ca, ell, seed)
    return _finish_packing(vg, ca)


# -- distributed variant -------------------------------------------------


def cds_pack_distributed(
    g: Graph,
    k_guess: int,
    cfg: SimConfig,
    L: int | None = None,
    t_factor: float = 0.25,
    t: int | None = None,
) -> tuple[CdsPacking, Transcript]:
    """Same pipeline with message-round accounting and Luby matching.

    One virtual-graph round costs `rounds_per_meta` real rounds (default
    3L: each real node relays one virtual node's broadcast per real round).
    Component identification is charged min{D', D + ceil(sqrt(n'))log*n'}
    meta-rounds per call, with the largest class-component size standing in
    for the strong diameter D'.
    """
    if not g.is_connected():
        raise CdsError("input graph must be connected")
    if L is None:
        L = default_layer_count(g.n)
    if t is None:
        t = choose_class_count(k_guess, g.n, t_factor)
    vg = build_virtual_graph(g, L)
    n_prime = vg.num_virtual
    budget = cfg.B if cfg.B is not None else default_budget(n_prime)
    per_meta = cfg.rounds_per_meta if cfg.rounds_per_meta is not None else 3 * L
    d_base = diameter(g)
    tr = Transcript(seed=cfg.seed)

    def meta(bits: int) -> None:
        for _ in range(per_meta):
            tr.record_round(bits, budget)

    def charge_component_id(label: str) -> None:
        d_prime = ca.largest_component_size()
        alt = int(d_base) + math.ceil(math.sqrt(n_prime)) * log_star(n_prime)
        tr.charge(label, min(d_prime, alt) * per_meta)

    ca = assign_base_layers(vg, t, cfg.seed)
    id_b = id_bits(n_prime)
    cls_b = id_bits(t)
    stages = max(1, math.ceil(math.log2(n_prime)))
    for ell in range(L // 2, L):
        draw_new_layer(ca, ell, cfg.seed)
        meta(cls_b)  # old nodes announce class numbers
        charge_component_id(f"component-id-layer-{ell + 1}")
        meta(cls_b + id_b)  # old nodes announce (class, component id)
        meta(cls_b + 1)  # type-1 connector symbols
        charge_component_id(f"deactivation-layer-{ell + 1}")
        meta(id_b + 1)  # (component id, activity) announcements
        meta(cls_b + id_b + 1)  # type-3 messages m_w (id or connector flag)
        bg = build_bridging_graph(vg, ca, ell)
        value_bits = max(8, budget - 2 * id_bits(n_prime))

        def stage_meta(_bits, _ell=ell):
            # wire format: random value + proposer id + component id
            bits = value_bits + 2 * id_b
            meta(bits)  # proposals out
            charge_component_id(f"accept-aggregation-layer-{_ell + 1}")
            meta(bits)  # accepted proposal broadcast back

        matching = luby_matching_distributed(
            bg, cfg.seed, stages, value_bits=value_bits, on_stage=stage_meta
        )
        assign2 = ca.pending["fallback"].copy()
        for v, (i, _comp) in matching.items():
            assign2[v] = i
        _register_layer(ca, ell, ca.pending["type1"], assign2, ca.pending["type3"])
        if tr.charged_rounds > cfg.round_cap:
            raise CdsError(f"round cap {cfg.round_cap} exceeded at layer {ell + 1}")

    # tree extraction: one MST pass on the virtual graph, charged
    alt = int(d_base) + math.ceil(math.sqrt(n_prime)) * log_star(n_prime)
    tr.charge("mst-extraction", min(ca.largest_component_size(), alt) * per_meta)
    return _finish_packing(vg, ca), tr


# -- connectivity approximation ------------------------------------------


def approx_vertex_connectivity(
    g: Graph,
    seed: int = 0,
    L: int | None = None,
    t_factor: float = 0.25,
    tester_seed: int | None = None,
):
    """Largest guess n/2^j whose packing passes the partition tester.

    Returns (class count of the accepted packing, the packing). The class
    count is a vertex-connectivity lower-bound indicator within an
    O(log n) factor of k.
    """
    from .tester import test_cds_partition_centralized

    if tester_seed is None:
        tester_seed = seed + 1
    guesses = []
    j = 0
    while True:
        guess = max(1, g.n >> j)
        if not guesses or guess != guesses[-1]:
            guesses.append(guess)
        if guess == 1:
            break
        j += 1
    last = None
    for guess in guesses:
        try:
            packing = cds_pack_centralized(g, guess, L=L, t_factor=t_factor, seed=seed)
        except CdsError:
            continue
        outcome = test_cds_partition_centralized(
            g,
            packing.classes,
            packing.t,
            tester_seed,
            units=3 * packing.L,
            n_prime=3 * packing.L * g.n,
        )
        if outcome.verdict == "pass":
            return packing.t, packing
        last = packing
    # every guess failed; fall back to the single-class answer
    if last is not None and last.t == 1:
        return 1, last
    packing = cds_pack_centralized(g, 1, L=L, t=1, seed=seed)
    return 1, packing
