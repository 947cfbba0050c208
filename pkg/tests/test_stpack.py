import json
import math

import numpy as np
import pytest

from conftest import kruskal_reference, spanning_trees_brute
from conndecomp import generators, oracles
from conndecomp.graph import Graph
from conndecomp.stpack import (
    StPackError,
    _MstSolver,
    choose_eta,
    edge_partition,
    iteration_cap,
    mw_alpha,
    mw_beta,
    scale_packing,
    st_pack_distributed_cost_model,
    st_pack_general,
    st_pack_small,
)


def test_mw_parameters():
    assert mw_alpha(10, 0.1) == math.ceil(20 * math.log(200))
    a = mw_alpha(28, 0.1)
    assert mw_beta(a, 8) == 1.0 / (4 * a * 3)
    assert iteration_cap(8, 28, 0.1, 3) > 0


def test_mst_solver_matches_kruskal():
    rng = np.random.default_rng(12)
    for _ in range(60):
        n = int(rng.integers(4, 25))
        p = float(rng.uniform(0.25, 0.9))
        g = generators.gen_gnp(n, p, int(rng.integers(0, 10**9)))
        if not g.is_connected():
            continue
        edges = g.edges()
        esrc = np.array([e[0] for e in edges])
        edst = np.array([e[1] for e in edges])
        solver = _MstSolver(esrc, edst, n)
        for _ in range(3):
            order = rng.permutation(len(edges))
            assert solver.tree(order).tolist() == kruskal_reference(g, order)


def test_st_pack_small_invariants():
    for g, lam in [
        (generators.gen_cycle(8), 2),
        (generators.gen_clique(6), 5),
        (generators.gen_hypercube(3), 3),
    ]:
        state = st_pack_small(g, lam, 0.1)
        assert abs(state.total_weight() - 1.0) < 1e-9
        assert state.max_z <= 1.0 + 6 * 0.1 + 1e-9
        assert state.iterations <= iteration_cap(g.n, g.m, 0.1, math.ceil((lam - 1) / 2))
        valid_trees = set(spanning_trees_brute(g))
        edges = g.edges()
        for key, w in state.trees:
            assert w > 0
            assert tuple(edges[j] for j in key) in valid_trees
        # x is the exponential moving average of the tree indicators: the
        # per-edge load times target stays near the rounded z
        z = np.round(state.x * math.ceil((lam - 1) / 2) * g.n) / g.n
        assert float(z.max()) == state.max_z


def test_st_pack_small_rejects_bad_input():
    with pytest.raises(StPackError):
        st_pack_small(generators.gen_cycle(4), 0, 0.1)
    with pytest.raises(StPackError):
        st_pack_small(generators.gen_cycle(4), 2, 1.5)
    with pytest.raises(StPackError):
        st_pack_small(Graph.from_edges(4, [(0, 1), (2, 3)]), 2, 0.1)


def test_st_pack_single_vertex():
    g = Graph.from_edges(1, [])
    packing = st_pack_general(g, 0.1)
    assert len(packing.trees.trees) == 1
    assert packing.trees.trees[0].vertices == [0]
    assert oracles.verify_spanning_packing(g, packing.trees).valid


def test_scale_packing_load_and_total():
    g = generators.gen_clique(6)
    lam = 5
    state = st_pack_small(g, lam, 0.1)
    scaled = scale_packing(state, lam, 0.1)
    target = math.ceil((lam - 1) / 2)
    assert scaled.total_weight == pytest.approx(target / 1.6)
    rep = oracles.verify_spanning_packing(g, scaled)
    assert rep.valid
    assert rep.max_edge_load <= 1.0 + 1e-9


def test_total_weight_cannot_exceed_edge_connectivity():
    # any feasible fractional spanning packing has total weight <= lambda:
    # each spanning tree crosses every cut at least once and edge loads are
    # capped at 1
    for g in (generators.gen_cycle(8), generators.gen_clique(6), generators.gen_hypercube(4)):
        lam = oracles.edge_connectivity(g)
        packing = st_pack_general(g, 0.1, seed=1)
        assert packing.total_weight <= lam + 1e-9


def test_st_pack_general_deterministic():
    g = generators.gen_gnp(24, 0.4, 2)
    a = st_pack_general(g, 0.1, seed=5)
    b = st_pack_general(g, 0.1, seed=5)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_st_pack_general_stats_and_validity():
    g = generators.gen_clique(8)
    packing = st_pack_general(g, 0.1, seed=1)
    assert packing.lambda_used == 7
    assert packing.eta == 1
    assert len(packing.subgraph_stats) == 1
    stats = packing.subgraph_stats[0]
    assert stats["lam"] == 7 and stats["iterations"] > 0
    assert oracles.verify_spanning_packing(g, packing.trees).valid
    ids = [t.id for t in packing.trees.trees]
    assert ids == list(range(len(ids)))


def test_potential_log_recorded_and_finite():
    state = st_pack_small(generators.gen_clique(6), 5, 0.1)
    pot = state.potential_log
    assert pot and all(math.isfinite(p) for p in pot)
    # fast-forwarded repeats are logged once, so at most one entry per step
    assert len(pot) <= state.iterations + 1


def test_edge_partition_properties():
    g = generators.gen_gnp(30, 0.5, 9)
    part = edge_partition(g, 3, 4)
    assert part.eta == 3
    total = 0
    for e in g.edges():
        idx = part.assignment[e]
        assert 0 <= idx < 3
    for i, sub in enumerate(part.subgraphs):
        assert sub.n == g.n
        for e in sub.edges():
            assert part.assignment[e] == i
        total += sub.m
    assert total == g.m
    assert edge_partition(g, 3, 4).assignment == part.assignment  # deterministic
    ident = edge_partition(g, 1, 4)
    assert ident.subgraphs == [g]
    with pytest.raises(StPackError):
        edge_partition(g, 0, 1)


def test_choose_eta_threshold():
    n = 1000
    ln_n = math.log(n)
    assert choose_eta(5, n, 0.1) == 1
    assert choose_eta(0.99 * 100 * ln_n / 0.01, n, 0.1) == 1
    big = 2 * 100 * ln_n / 0.01
    assert choose_eta(big, n, 0.1) == math.floor(big * 0.1 * 0.1 / (30 * ln_n))


def test_forced_partition_union_is_valid_packing():
    # pack the two halves of a forced eta=2 partition separately; the union
    # must still be a valid spanning packing of the whole graph
    g = generators.gen_gnp(24, 0.8, 3)
    part = edge_partition(g, 2, 0)
    all_trees = []
    for sub in part.subgraphs:
        lam_i = oracles.edge_connectivity(sub)
        if lam_i < 1:
            continue
        state = st_pack_small(sub, lam_i, 0.2)
        scaled = scale_packing(state, lam_i, 0.2, id_base=len(all_trees))
        all_trees.extend(scaled.trees)
    from conndecomp.packing import TreePacking

    rep = oracles.verify_spanning_packing(g, TreePacking(trees=all_trees))
    assert rep.valid


def test_distributed_cost_model_positive_and_monotone():
    g = generators.gen_clique(8)
    c1 = st_pack_distributed_cost_model(g, 0.2)
    c2 = st_pack_distributed_cost_model(g, 0.1)
    assert 0 < c1 < c2  # smaller eps means more iterations
