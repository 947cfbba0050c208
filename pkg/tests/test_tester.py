import math

from conftest import circulant, even_odd_classes
from conndecomp import generators
from conndecomp.sim import SimConfig
from conndecomp.tester import _domination_witness
from conndecomp.tester import test_cds_partition_centralized as run_centralized
from conndecomp.tester import test_cds_partition_distributed as run_distributed


def _split_classes(n):
    """Even/odd chords of a circulant with the two bridging chords removed."""
    g = circulant(n, dists=(1, 2))
    half = n // 2
    kept = [e for e in g.edges() if e not in {(0, 2), (half, (half + 2) % n)}]
    from conndecomp.graph import Graph

    return Graph.from_edges(n, kept)


def test_passes_on_valid_partition():
    for n in (10, 14, 20):
        g = circulant(n)
        classes = even_odd_classes(n)
        out = run_centralized(g, classes, seed=3)
        assert out.verdict == "pass"
        assert out.detecting_node is None
        assert out.rounds_used == 1 + 4 * math.ceil(math.log(n))


def test_domination_failure_has_witness():
    g = generators.gen_path(6)
    classes = [[0, 1]]  # does not dominate 3, 4, 5
    out = run_centralized(g, classes, seed=0)
    assert out.verdict == "domination-failure"
    wit = _domination_witness(g, [set(c) for c in classes])
    assert wit is not None
    assert out.detecting_node == wit[1]
    assert not any(u in classes[0] for u in g.adjacency[out.detecting_node])
    assert out.rounds_used == 0


def test_detects_split_class():
    # both classes still dominate, but the even class splits into two
    # components once its bridging chords are gone; the first announcement
    # round already exposes conflicting component ids
    detected = 0
    for n in (12, 16, 20):
        g = _split_classes(n)
        classes = even_odd_classes(n)
        for seed in range(20):
            out = run_centralized(g, classes, seed=seed)
            assert out.verdict == "connectivity-failure"
            assert out.detecting_node is not None
            detected += 1
    assert detected == 60


def test_deterministic_per_seed():
    g = _split_classes(16)
    classes = even_odd_classes(16)
    a = run_centralized(g, classes, seed=9)
    b = run_centralized(g, classes, seed=9)
    assert a.to_json() == b.to_json()


def test_units_pool_announcements():
    # with units > 1 the protocol still passes and uses the same number of
    # announcement rounds (n_prime scales, c_T ln n' rounds change)
    g = circulant(12)
    classes = even_odd_classes(12)
    out = run_centralized(g, classes, seed=1, units=24, c_T=2)
    assert out.verdict == "pass"
    assert out.rounds_used == 1 + 2 * math.ceil(math.log(12 * 24))


def test_distributed_accounting_pass():
    g = circulant(14)
    classes = even_odd_classes(14)
    out, tr = run_distributed(g, classes, cfg=SimConfig(seed=2))
    assert out.verdict == "pass"
    assert out.node_verdicts == ["pass"] * g.n
    assert out.rounds_used == tr.rounds_used
    assert not tr.violations
    labels = [label for label, _ in tr.primitive_charges]
    assert labels == ["component-id"]
    assert tr.charged_rounds >= tr.rounds_used


def test_distributed_domination_failure_short_circuits():
    g = generators.gen_path(6)
    out, tr = run_distributed(g, [[0, 1]], cfg=SimConfig(seed=0))
    assert out.verdict == "domination-failure"
    # only the announcement + propagation window rounds are spent
    d = 5
    assert tr.rounds_used == 1 + (d + 1)
    assert tr.primitive_charges == []


def test_distributed_detects_split():
    g = _split_classes(16)
    out, tr = run_distributed(g, even_odd_classes(16), cfg=SimConfig(seed=4))
    assert out.verdict == "connectivity-failure"
    assert tr.rounds_used > 0
