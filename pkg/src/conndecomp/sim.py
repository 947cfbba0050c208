"""Synchronous round-based message-passing simulator.

Two congestion models are supported: in "vcongest" a node broadcasts one
message per round to all neighbors; in "econgest" it may send a distinct
message per incident edge. Every message carries an explicit bit size and
the transcript records the per-round maximum, so the budget B is testable
rather than hidden inside O(log n).

A round has a send phase and a receive phase; messages emitted in round r
are received in round r. Nodes may halt in either phase; the run ends when
all nodes have halted.

Component identification over an edge subgraph is provided as a charged
primitive: it executes by flooding but its transcript cost uses the
round-cost formula min{D', D + ceil(sqrt(n')) * log*(n')} of the underlying
protocol, which is not simulated at message level.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from . import rng as rnglib
from .graph import INF, Graph, canonical_edge, connected_components, diameter, log_star


class SimError(RuntimeError):
    """Round cap exceeded or message budget violated in strict mode."""


def id_bits(n: int) -> int:
    """Bits needed to name one of n items (at least 1)."""
    return max(1, math.ceil(math.log2(max(n, 2))))


def default_budget(n: int) -> int:
    return 4 * id_bits(n)


@dataclass
class SimConfig:
    model: str = "vcongest"  # or "econgest"
    B: int | None = None  # message budget in bits; None = 4*ceil(log2 n)
    seed: int = 0
    round_cap: int = 1_000_000
    strict_bits: bool = False
    rounds_per_meta: int | None = None  # real rounds charged per virtual-graph round

    def budget(self, n: int) -> int:
        return self.B if self.B is not None else default_budget(n)


@dataclass
class Msg:
    payload: object
    bits: int


@dataclass
class Transcript:
    seed: int = 0
    rounds_used: int = 0
    max_bits_per_round: list = field(default_factory=list)
    violations: list = field(default_factory=list)  # (round, node, bits)
    primitive_charges: list = field(default_factory=list)  # (label, rounds)

    @property
    def charged_rounds(self) -> int:
        return self.rounds_used + sum(c for _, c in self.primitive_charges)

    def record_round(self, max_bits: int, budget: int, offenders=()) -> None:
        self.rounds_used += 1
        self.max_bits_per_round.append(max_bits)
        if max_bits > budget:
            for node, bits in offenders:
                self.violations.append((self.rounds_used, node, bits))

    def charge(self, label: str, rounds: int) -> None:
        self.primitive_charges.append((label, int(rounds)))

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "rounds_used": self.rounds_used,
            "charged_rounds": self.charged_rounds,
            "max_bits_per_round": list(self.max_bits_per_round),
            "violations": [list(v) for v in self.violations],
            "primitive_charges": [[label, c] for label, c in self.primitive_charges],
        }


class NodeProgram:
    """Per-node state machine.

    Subclasses override `setup`, `send`, and `on_receive`. `send` returns a
    Msg (vcongest), a dict neighbor->Msg (econgest), or None. Set
    `self.halted = True` to stop participating; halting during `send` still
    delivers that round's outgoing message.
    """

    def setup(self, node: int, neighbors, cfg: SimConfig, stream) -> None:
        self.node = node
        self.neighbors = neighbors
        self.cfg = cfg
        self.rng = stream
        self.halted = False

    def send(self, round_no: int):
        return None

    def on_receive(self, round_no: int, inbox) -> None:
        """inbox is a list of (sender, payload) pairs."""


def run(g: Graph, program_factory, cfg: SimConfig) -> tuple[list, Transcript]:
    """Execute programs synchronously until all halt or round_cap.

    `program_factory(v)` builds the program for node v. Returns the list of
    program objects (their state is the output) and the transcript.
    """
    budget = cfg.budget(g.n)
    progs = []
    for v in range(g.n):
        p = program_factory(v)
        p.setup(v, g.adjacency[v], cfg, rnglib.stream(cfg.seed, "node", v))
        progs.append(p)
    tr = Transcript(seed=cfg.seed)

    for round_no in range(1, cfg.round_cap + 1):
        if all(p.halted for p in progs):
            break
        inboxes: list[list] = [[] for _ in range(g.n)]
        max_bits = 0
        offenders = []
        for v, p in enumerate(progs):
            if p.halted:
                continue
            out = p.send(round_no)
            if out is None:
                continue
            if cfg.model == "vcongest":
                if not isinstance(out, Msg):
                    raise SimError(f"node {v}: vcongest send must return a Msg")
                max_bits = max(max_bits, out.bits)
                if out.bits > budget:
                    offenders.append((v, out.bits))
                for w in g.adjacency[v]:
                    inboxes[w].append((v, out.payload))
            else:
                if not isinstance(out, dict):
                    raise SimError(f"node {v}: econgest send must return a dict")
                for w, msg in out.items():
                    if w not in p.neighbors:
                        raise SimError(f"node {v}: message to non-neighbor {w}")
                    max_bits = max(max_bits, msg.bits)
                    if msg.bits > budget:
                        offenders.append((v, msg.bits))
                    inboxes[w].append((v, msg.payload))
        tr.record_round(max_bits, budget, offenders)
        if cfg.strict_bits and tr.violations:
            raise SimError(f"message budget {budget} bits exceeded: {tr.violations[-1]}")
        for v, p in enumerate(progs):
            if not p.halted and inboxes[v]:
                p.on_receive(round_no, inboxes[v])
            p.last_inbox = inboxes[v]
    else:
        if not all(p.halted for p in progs):
            raise SimError(f"round cap {cfg.round_cap} exceeded")

    return progs, tr


class _BfsProgram(NodeProgram):
    def setup(self, node, neighbors, cfg, stream):
        super().setup(node, neighbors, cfg, stream)
        self.parent = None
        self.dist = None
        self._announce = False

    def start_as_root(self):
        self.parent = self.node
        self.dist = 0
        self._announce = True

    def send(self, round_no):
        if self._announce:
            self._announce = False
            self.halted = True
            return Msg(self.dist, id_bits(len(self.neighbors) + self.dist + 2))
        return None

    def on_receive(self, round_no, inbox):
        if self.parent is None:
            src, d = min(inbox, key=lambda sp: (sp[1], sp[0]))
            self.parent = src
            self.dist = d + 1
            self._announce = True


def build_bfs_tree(g: Graph, root: int, cfg: SimConfig) -> tuple[dict, Transcript]:
    """Distributed BFS: returns {node: parent} (root maps to itself)."""

    class _Root(_BfsProgram):
        def setup(self, node, neighbors, cfg_, stream):
            super().setup(node, neighbors, cfg_, stream)
            self.start_as_root()

    progs, tr = run(g, lambda v: _Root() if v == root else _BfsProgram(), cfg)
    parents = {v: p.parent for v, p in enumerate(progs)}
    return parents, tr


def _subgraph_structure(g: Graph, member_edges):
    """Components of the filtered graph plus its active node set."""
    labels = connected_components(g, member_edges)
    active = set()
    for u in range(g.n):
        for w in g.adjacency[u]:
            if u < w and member_edges((u, w)):
                active.add(u)
                active.add(w)
    return labels, active


def _component_diameter(g: Graph, member_edges, members: list) -> int:
    """Exact diameter of one filtered component (BFS from every member)."""
    member_set = set(members)
    best = 0
    for s in members:
        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adjacency[u]:
                if w in member_set and w not in dist and member_edges(canonical_edge(u, w)):
                    dist[w] = dist[u] + 1
                    q.append(w)
        best = max(best, max(dist.values()))
    return best


def component_charge(d_prime: int, d_base: float, n_prime: int) -> int:
    """Charged meta-rounds for one component-identification call."""
    if d_prime == 0:
        return 0
    d = 0 if d_base is INF else int(d_base)
    alt = d + math.ceil(math.sqrt(n_prime)) * log_star(n_prime)
    return min(d_prime, alt)


def identify_components(
    g: Graph,
    member_edges,
    values: list,
    mode: str = "min",
    cfg: SimConfig | None = None,
    transcript: Transcript | None = None,
    label: str = "identify-components",
):
    """Each node learns the min (or max) value in its filtered component.

    Returns (per-node result list, per-node component label list, charge).
    The transcript, if given, is charged min{D', D + ceil(sqrt(n'))log*n'}
    rounds where D' is the largest filtered-component diameter and n' the
    active node count.
    """
    pick = min if mode == "min" else max
    labels, active = _subgraph_structure(g, member_edges)
    by_comp: dict = {}
    for v in range(g.n):
        by_comp.setdefault(labels[v], []).append(v)
    result = list(values)
    d_prime = 0
    for members in by_comp.values():
        best = pick(values[v] for v in members)
        for v in members:
            result[v] = best
        if len(members) > 1:
            d_prime = max(d_prime, _component_diameter(g, member_edges, members))
    n_prime = max(len(active), 1)
    charge = component_charge(d_prime, diameter(g), n_prime)
    if transcript is not None:
        transcript.charge(label, charge)
    return result, labels, charge


def broadcast_within_component(
    g: Graph,
    member_edges,
    origins: dict,
    cfg: SimConfig | None = None,
    transcript: Transcript | None = None,
    label: str = "component-broadcast",
) -> dict:
    """Flood payloads from origin nodes through their filtered components.

    Returns {node: sorted list of payloads it received}. Charged rounds
    equal the largest relevant component diameter.
    """
    labels, _ = _subgraph_structure(g, member_edges)
    by_comp: dict = {}
    for v in range(g.n):
        by_comp.setdefault(labels[v], []).append(v)
    delivery = {}
    d_prime = 0
    for comp_label, members in by_comp.items():
        payloads = sorted(origins[v] for v in members if v in origins)
        for v in members:
            delivery[v] = list(payloads)
        if payloads and len(members) > 1:
            d_prime = max(d_prime, _component_diameter(g, member_edges, members))
    if transcript is not None:
        transcript.charge(label, d_prime)
    return delivery


def exchange(g: Graph, outgoing: dict, transcript: Transcript, cfg: SimConfig) -> list:
    """One vcongest round done imperatively: node -> Msg broadcast to neighbors.

    Used by phase-structured protocols that do not need autonomous node
    programs. Returns per-node inbox lists of (sender, payload).
    """
    budget = cfg.budget(g.n)
    inboxes: list[list] = [[] for _ in range(g.n)]
    max_bits = 0
    offenders = []
    for v, msg in outgoing.items():
        max_bits = max(max_bits, msg.bits)
        if msg.bits > budget:
            offenders.append((v, msg.bits))
        for w in g.adjacency[v]:
            inboxes[w].append((v, msg.payload))
    transcript.record_round(max_bits, budget, offenders)
    if cfg.strict_bits and offenders:
        raise SimError(f"message budget {budget} bits exceeded: {offenders[0]}")
    return inboxes
