"""Command-line front end: generators, oracles, packings, tester, gossip.

Every subcommand emits a JSON experiment report (stdout or --json-out) and
is a deterministic function of its inputs and --seed. Exit codes: 0 on
success, 1 on validation errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import generators, oracles
from .cds import CdsError, approx_vertex_connectivity, cds_pack_centralized, cds_pack_distributed
from .gossip import GossipError, gossip
from .graph import Graph, GraphError, diameter, load_graph, save_graph
from .packing import TreePacking
from .sim import SimConfig, SimError
from .stpack import StPackError, st_pack_general
from .tester import test_cds_partition_centralized, test_cds_partition_distributed


class CliError(Exception):
    """Validation failure surfaced to the user (exit code 1)."""


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load(args) -> Graph:
    try:
        return load_graph(args.graph, remap=getattr(args, "remap", False))
    except (OSError, GraphError) as exc:
        raise CliError(str(exc)) from exc


def _sim_config(args) -> SimConfig:
    return SimConfig(
        model="econgest" if args.model == "econgest" else "vcongest",
        seed=args.seed,
        strict_bits=args.strict_bits,
    )


def _cmd_gen(args) -> dict:
    kind = args.kind
    try:
        if kind == "gnp":
            g = generators.gen_gnp(args.n, args.p, args.seed)
        elif kind == "lower_bound":
            x = {int(v) for v in args.x.split(",")} if args.x else set()
            y = {int(v) for v in args.y.split(",")} if args.y else set()
            g, _labels = generators.gen_lower_bound_graph(args.h, args.ell, args.w, x, y)
        elif kind == "clique":
            g = generators.gen_clique(args.s)
        elif kind == "cycle":
            g = generators.gen_cycle(args.n)
        elif kind == "path":
            g = generators.gen_path(args.n)
        elif kind == "hypercube":
            g = generators.gen_hypercube(args.d)
        elif kind == "clique_chain":
            g = generators.gen_clique_chain(args.c, args.s)
        else:
            raise CliError(f"unknown kind {kind!r}")
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    save_graph(g, args.out)
    return {"command": "gen", "kind": kind, "n": g.n, "m": g.m, "out": args.out, "seed": args.seed}


def _cmd_oracle(args) -> dict:
    g = _load(args)
    d = diameter(g)
    return {
        "command": "oracle",
        "graph": args.graph,
        "n": g.n,
        "m": g.m,
        "vertex_connectivity": oracles.vertex_connectivity(g),
        "edge_connectivity": oracles.edge_connectivity(g),
        "diameter": None if d == float("inf") else int(d),
    }


def _cmd_cds_pack(args) -> dict:
    g = _load(args)
    try:
        if args.distributed:
            packing, tr = cds_pack_distributed(g, args.k_guess, _sim_config(args))
            transcript = tr.to_json()
        else:
            packing = cds_pack_centralized(g, args.k_guess, seed=args.seed)
            transcript = None
    except (CdsError, SimError) as exc:
        raise CliError(str(exc)) from exc
    report = oracles.verify_dominating_packing(g, packing.trees)
    out = {
        "command": "cds-pack",
        "graph": args.graph,
        "k_guess": args.k_guess,
        "seed": args.seed,
        "packing": packing.to_json(),
        "verifier": report.to_json(),
    }
    if transcript is not None:
        out["transcript"] = transcript
    if not report.valid:
        raise CliError(f"packing failed verification: {report.failures[:3]}")
    return out


def _cmd_st_pack(args) -> dict:
    g = _load(args)
    try:
        packing = st_pack_general(g, args.epsilon, seed=args.seed)
    except StPackError as exc:
        raise CliError(str(exc)) from exc
    report = oracles.verify_spanning_packing(g, packing.trees)
    out = {
        "command": "st-pack",
        "graph": args.graph,
        "epsilon": args.epsilon,
        "seed": args.seed,
        "packing": packing.to_json(),
        "total_weight": packing.total_weight,
        "verifier": report.to_json(),
    }
    if not report.valid:
        raise CliError(f"packing failed verification: {report.failures[:3]}")
    return out


def _cmd_approx_vc(args) -> dict:
    g = _load(args)
    try:
        k_lower, packing = approx_vertex_connectivity(g, seed=args.seed)
    except CdsError as exc:
        raise CliError(str(exc)) from exc
    return {
        "command": "approx-vc",
        "graph": args.graph,
        "seed": args.seed,
        "k_lower": k_lower,
        "classes": packing.t,
        "L": packing.L,
    }


def _cmd_test_packing(args) -> dict:
    g = _load(args)
    try:
        with open(args.classes) as fh:
            classes = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read classes file: {exc}") from exc
    if not isinstance(classes, list) or not all(isinstance(c, list) for c in classes):
        raise CliError("classes file must be a JSON list of vertex-id lists")
    if args.distributed:
        outcome, tr = test_cds_partition_distributed(g, classes, cfg=_sim_config(args))
        transcript = tr.to_json()
    else:
        outcome = test_cds_partition_centralized(g, classes, seed=args.seed)
        transcript = None
    out = {
        "command": "test-packing",
        "graph": args.graph,
        "seed": args.seed,
        "outcome": outcome.to_json(),
    }
    if transcript is not None:
        out["transcript"] = transcript
    return out


def _cmd_gossip(args) -> dict:
    g = _load(args)
    try:
        packing = TreePacking.load(args.packing)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise CliError(f"cannot read packing file: {exc}") from exc
    n_messages = args.messages
    origins = [(i % g.n, i) for i in range(n_messages)]
    cfg = _sim_config(args)
    try:
        delivery, tr = gossip(g, packing, origins, cfg=cfg, seed=args.seed)
    except GossipError as exc:
        raise CliError(str(exc)) from exc
    complete = all(len(v) == n_messages for v in delivery.values())
    return {
        "command": "gossip",
        "graph": args.graph,
        "messages": n_messages,
        "seed": args.seed,
        "rounds_used": tr.rounds_used,
        "complete": complete,
    }


def _cmd_bench(args) -> dict:
    """A compact fixed-seed calibration bundle touching every pipeline."""
    results = {}
    k8 = generators.gen_clique(8)
    packing = cds_pack_centralized(k8, 7, seed=args.seed)
    rep = oracles.verify_dominating_packing(k8, packing.trees)
    results["cds_pack_k8"] = {"t": packing.t, "valid": rep.valid, "total_weight": rep.total_weight}

    st = st_pack_general(k8, args.epsilon, seed=args.seed)
    rep = oracles.verify_spanning_packing(k8, st.trees)
    results["st_pack_k8"] = {
        "valid": rep.valid,
        "total_weight": st.total_weight,
        "iterations": st.subgraph_stats[0]["iterations"],
    }

    cyc = generators.gen_cycle(12)
    outcome = test_cds_partition_centralized(cyc, [list(range(12))], seed=args.seed)
    results["tester_cycle12"] = outcome.to_json()

    hyper = generators.gen_hypercube(4)
    results["oracle_hypercube4"] = {
        "vertex_connectivity": oracles.vertex_connectivity(hyper),
        "edge_connectivity": oracles.edge_connectivity(hyper),
    }

    delivery, tr = gossip(k8, packing, [(i, i) for i in range(8)], seed=args.seed)
    results["gossip_k8"] = {
        "rounds_used": tr.rounds_used,
        "complete": all(len(v) == 8 for v in delivery.values()),
    }
    return {"command": "bench", "seed": args.seed, "epsilon": args.epsilon, "results": results}


def _add_common(parser, suppress: bool) -> None:
    """Global flags; registered on the root and again per subcommand so they
    can be given on either side of the subcommand name."""
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=d if suppress else 0)
    parser.add_argument("--json-out", default=d, help="write the report to a file")
    parser.add_argument("--model", choices=["vcongest", "econgest"], default=d if suppress else "vcongest")
    parser.add_argument("--epsilon", type=float, default=d if suppress else 0.1)
    if suppress:
        parser.add_argument("--strict-bits", action="store_true", default=argparse.SUPPRESS)
    else:
        parser.add_argument("--strict-bits", action="store_true", help="fail on message budget violations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conndecomp",
        description="Graph connectivity decomposition toolkit",
        allow_abbrev=False,
    )
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph edge list")
    p.add_argument("--kind", required=True, choices=[
        "gnp", "clique", "cycle", "path", "hypercube", "clique_chain", "lower_bound",
    ])
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--s", type=int, default=5)
    p.add_argument("--c", type=int, default=3)
    p.add_argument("--d", type=int, default=4)
    p.add_argument("--h", type=int, default=4)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--w", type=int, default=6)
    p.add_argument("--x", default="", help="comma-separated index set X")
    p.add_argument("--y", default="", help="comma-separated index set Y")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("oracle", help="exact connectivity values")
    p.add_argument("--graph", required=True)
    p.add_argument("--remap", action="store_true")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("cds-pack", help="fractional dominating tree packing")
    p.add_argument("--graph", required=True)
    p.add_argument("--k-guess", type=int, required=True)
    p.add_argument("--distributed", action="store_true")
    p.set_defaults(func=_cmd_cds_pack)

    p = sub.add_parser("st-pack", help="fractional spanning tree packing")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_st_pack)

    p = sub.add_parser("approx-vc", help="vertex connectivity approximation")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=_cmd_approx_vc)

    p = sub.add_parser("test-packing", help="randomized CDS partition test")
    p.add_argument("--graph", required=True)
    p.add_argument("--classes", required=True, help="JSON file: list of vertex-id lists")
    p.add_argument("--distributed", action="store_true")
    p.set_defaults(func=_cmd_test_packing)

    p = sub.add_parser("gossip", help="broadcast messages over a packing")
    p.add_argument("--graph", required=True)
    p.add_argument("--packing", required=True, help="TreePacking JSON file")
    p.add_argument("--messages", type=int, default=8)
    p.set_defaults(func=_cmd_gossip)

    p = sub.add_parser("bench", help="fixed-seed calibration bundle")
    p.set_defaults(func=_cmd_bench)

    for child in sub.choices.values():
        child.allow_abbrev = False
        _add_common(child, suppress=True)
    return parser


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        report = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report, args)
    return 0


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
