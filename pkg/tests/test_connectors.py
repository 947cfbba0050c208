"""Structural properties of the component-merging step, checked against an
independent enumeration of short bridging paths.

For a class with >= 2 components, a "bridging path" between a component C
and the rest of the class support R is a path in the base graph with both
endpoints in the supports, at most 2 internal vertices outside the support,
and (for the 2-internal form s,u,w,t) the side conditions: u has no
neighbor in R and w has no neighbor in C.
"""

from conftest import dominates, induced_components
from conndecomp import generators, oracles
from conndecomp.cds import assign_base_layers, build_virtual_graph


def _adjacent_to(g, v, target):
    return any(u in target for u in g.adjacency[v])


def _enumerate_bridging_paths(g, comp, rest):
    """All 1- and 2-internal bridging paths as tuples of internal vertices."""
    outside = [v for v in range(g.n) if v not in comp and v not in rest]
    paths = []
    for w in outside:
        if _adjacent_to(g, w, comp) and _adjacent_to(g, w, rest):
            paths.append((w,))
    for u in outside:
        if not _adjacent_to(g, u, comp) or _adjacent_to(g, u, rest):
            continue
        for w in g.adjacency[u]:
            if w in comp or w in rest:
                continue
            if _adjacent_to(g, w, rest) and not _adjacent_to(g, w, comp):
                paths.append((u, w))
    return paths


def _disjoint_path_flow(g, comp, rest):
    """Max internally vertex-disjoint bridging path count via max-flow."""
    outside = [v for v in range(g.n) if v not in comp and v not in rest]
    idx = {v: i for i, v in enumerate(outside)}
    net = oracles._FlowNet(2 * len(outside) + 2)
    S, T = 2 * len(outside), 2 * len(outside) + 1
    big = g.n
    adj_c = {v for v in outside if _adjacent_to(g, v, comp)}
    adj_r = {v for v in outside if _adjacent_to(g, v, rest)}
    for v in outside:
        net.add_arc(2 * idx[v], 2 * idx[v] + 1, 1)
        if v in adj_c:
            net.add_arc(S, 2 * idx[v], big)
        if v in adj_r:
            net.add_arc(2 * idx[v] + 1, T, big)
    for u in outside:
        if u in adj_c and u not in adj_r:
            for w in g.adjacency[u]:
                if w in idx and w in adj_r and w not in adj_c:
                    net.add_arc(2 * idx[u] + 1, 2 * idx[w], big)
    return net.max_flow(S, T)


def _qualifying_cases(max_cases=25):
    """(graph, kappa, class support, components) where the class support
    dominates yet is disconnected."""
    cases = []
    for seed in range(200):
        if len(cases) >= max_cases:
            break
        g = generators.gen_gnp(36, 0.13, seed)
        if not g.is_connected():
            continue
        k = None
        vg = build_virtual_graph(g, 4)
        ca = assign_base_layers(vg, 6, seed)
        for i in range(ca.t):
            sup = set(ca.class_members(i))
            if not sup or not dominates(g, sup):
                continue
            comps = induced_components(g, sup)
            if len(comps) < 2:
                continue
            if k is None:
                k = oracles.vertex_connectivity(g)
            cases.append((g, k, sup, comps))
    return cases


def test_every_component_has_abundant_disjoint_bridging_paths():
    # when a class's support dominates the graph, each of its components can
    # be bridged to the rest by at least kappa internally disjoint paths
    cases = _qualifying_cases()
    assert len(cases) >= 15
    checks = 0
    for g, k, sup, comps in cases:
        for comp in comps:
            rest = sup - comp
            assert _disjoint_path_flow(g, comp, rest) >= k
            checks += 1
    assert checks >= 30


def test_flow_value_matches_enumerated_paths_existence():
    # the flow is positive exactly when at least one bridging path exists,
    # and never exceeds the number of enumerated paths
    for g, _k, sup, comps in _qualifying_cases(10):
        for comp in comps:
            rest = sup - comp
            paths = _enumerate_bridging_paths(g, comp, rest)
            flow = _disjoint_path_flow(g, comp, rest)
            assert (flow > 0) == bool(paths)
            assert flow <= len(paths)


def test_first_internal_vertex_serves_one_component_per_class():
    # a vertex in the "u" position of a 2-internal bridging path (adjacent
    # to C, not adjacent to the rest) can play that role for at most one
    # component of the class
    for seed in range(60):
        g = generators.gen_gnp(36, 0.13, seed)
        if not g.is_connected():
            continue
        vg = build_virtual_graph(g, 4)
        ca = assign_base_layers(vg, 6, seed)
        for i in range(ca.t):
            sup = set(ca.class_members(i))
            comps = induced_components(g, sup)
            if len(comps) < 2:
                continue
            serves: dict = {}
            for ci, comp in enumerate(comps):
                rest = sup - comp
                for path in _enumerate_bridging_paths(g, comp, rest):
                    if len(path) == 2:
                        serves.setdefault(path[0], set()).add(ci)
            for v, comp_ids in serves.items():
                assert len(comp_ids) == 1, (seed, i, v, comp_ids)


def test_domination_makes_two_hop_bridging_total():
    # with a dominating support, every outside vertex is adjacent to the
    # support, so each component reaches the rest within <= 2 internal hops
    # through its boundary; the flow certificate is therefore positive
    for g, _k, sup, comps in _qualifying_cases(10):
        for v in range(g.n):
            assert v in sup or _adjacent_to(g, v, sup)
        for comp in comps:
            assert _disjoint_path_flow(g, comp, sup - comp) >= 1
