"""Graph connectivity decomposition toolkit.

Decomposes vertex connectivity into fractionally vertex-disjoint dominating
trees and edge connectivity into fractionally edge-disjoint spanning trees,
with a synchronous congested-network simulator, exact oracles, a randomized
packing tester, and gossip applications on top.
"""

from .cds import (
    CdsError,
    CdsPacking,
    ClassAssignment,
    VirtualGraph,
    approx_vertex_connectivity,
    assign_base_layers,
    build_bridging_graph,
    build_virtual_graph,
    cds_pack_centralized,
    cds_pack_distributed,
    choose_class_count,
    default_layer_count,
    extract_trees,
    greedy_matching,
    luby_matching_distributed,
    process_layer_centralized,
)
from .generators import (
    gen_clique,
    gen_clique_chain,
    gen_cycle,
    gen_gnp,
    gen_hypercube,
    gen_lower_bound_graph,
    gen_path,
    gen_structured,
)
from .gossip import GossipError, GossipPlan, congestion_report, gossip, make_gossip_plan
from .graph import (
    Graph,
    GraphError,
    UnionFind,
    canonical_edge,
    connected_components,
    diameter,
    load_graph,
    log_star,
    mst,
    save_graph,
)
from .oracles import (
    VerifierReport,
    edge_connectivity,
    vertex_connectivity,
    verify_dominating_packing,
    verify_spanning_packing,
)
from .packing import TreePacking, WeightedTree
from .sim import (
    Msg,
    NodeProgram,
    SimConfig,
    SimError,
    Transcript,
    broadcast_within_component,
    build_bfs_tree,
    identify_components,
    run,
)
from .stpack import (
    EdgePartition,
    StPackError,
    StPacking,
    StPackingState,
    choose_eta,
    edge_partition,
    scale_packing,
    st_pack_distributed_cost_model,
    st_pack_general,
    st_pack_small,
)
from .tester import TestOutcome, test_cds_partition_centralized, test_cds_partition_distributed

__all__ = [name for name in dir() if not name.startswith("_")]
