import json

import pytest

from conndecomp import generators
from conndecomp.cli import cli_main
from conndecomp.graph import save_graph
from conndecomp.stpack import st_pack_general


@pytest.fixture
def k8_path(tmp_path):
    p = tmp_path / "k8.edges"
    save_graph(generators.gen_clique(8), str(p))
    return str(p)


def _run_json(args, tmp_path):
    out = tmp_path / "report.json"
    rc = cli_main(args + ["--json-out", str(out)])
    assert rc == 0
    with open(out) as fh:
        return json.load(fh)


def test_gen_and_oracle(tmp_path):
    gpath = tmp_path / "g.edges"
    rep = _run_json(["gen", "--kind", "hypercube", "--d", "4", "--out", str(gpath)], tmp_path)
    assert rep["n"] == 16 and rep["m"] == 32
    rep = _run_json(["oracle", "--graph", str(gpath)], tmp_path)
    assert rep["vertex_connectivity"] == 4
    assert rep["edge_connectivity"] == 4
    assert rep["diameter"] == 4


def test_gen_lower_bound(tmp_path):
    gpath = tmp_path / "lb.edges"
    rep = _run_json(
        ["gen", "--kind", "lower_bound", "--h", "3", "--ell", "1", "--w", "5",
         "--x", "2", "--y", "2", "--out", str(gpath)],
        tmp_path,
    )
    assert rep["n"] > 0
    rep = _run_json(["oracle", "--graph", str(gpath)], tmp_path)
    assert rep["vertex_connectivity"] == 4


def test_cds_pack_command(k8_path, tmp_path):
    rep = _run_json(["cds-pack", "--graph", k8_path, "--k-guess", "7", "--seed", "1"], tmp_path)
    assert rep["verifier"]["valid"] is True
    assert rep["packing"]["t"] >= 1
    # global flags accepted before the subcommand too
    rep2 = _run_json(["--seed", "1", "cds-pack", "--graph", k8_path, "--k-guess", "7"], tmp_path)
    assert rep2["packing"] == rep["packing"]


def test_cds_pack_distributed_command(k8_path, tmp_path):
    rep = _run_json(
        ["cds-pack", "--graph", k8_path, "--k-guess", "7", "--distributed", "--seed", "0"],
        tmp_path,
    )
    assert rep["verifier"]["valid"] is True
    assert rep["transcript"]["rounds_used"] > 0


def test_st_pack_command(k8_path, tmp_path):
    rep = _run_json(["st-pack", "--graph", k8_path, "--epsilon", "0.25", "--seed", "0"], tmp_path)
    assert rep["verifier"]["valid"] is True
    assert rep["total_weight"] > 0


def test_approx_vc_command(k8_path, tmp_path):
    rep = _run_json(["approx-vc", "--graph", k8_path, "--seed", "0"], tmp_path)
    assert rep["k_lower"] >= 1


def test_test_packing_command(k8_path, tmp_path):
    classes = tmp_path / "classes.json"
    classes.write_text(json.dumps([[0, 1, 2, 3], [4, 5, 6, 7]]))
    rep = _run_json(
        ["test-packing", "--graph", k8_path, "--classes", str(classes), "--seed", "0"], tmp_path
    )
    assert rep["outcome"]["verdict"] == "pass"
    rep = _run_json(
        ["test-packing", "--graph", k8_path, "--classes", str(classes), "--distributed"],
        tmp_path,
    )
    assert rep["outcome"]["verdict"] == "pass"
    assert rep["transcript"]["rounds_used"] > 0


def test_gossip_command(k8_path, tmp_path):
    packing = st_pack_general(generators.gen_clique(8), 0.25, seed=0)
    ppath = tmp_path / "packing.json"
    ppath.write_text(json.dumps(packing.trees.to_json()))
    rep = _run_json(
        ["gossip", "--graph", k8_path, "--packing", str(ppath), "--messages", "6"], tmp_path
    )
    assert rep["complete"] is True
    assert rep["rounds_used"] > 0


def test_bench_command(tmp_path):
    rep = _run_json(["bench", "--seed", "0"], tmp_path)
    assert rep["results"]["cds_pack_k8"]["valid"] is True
    assert rep["results"]["st_pack_k8"]["valid"] is True
    assert rep["results"]["tester_cycle12"]["verdict"] == "pass"
    assert rep["results"]["oracle_hypercube4"]["vertex_connectivity"] == 4
    assert rep["results"]["gossip_k8"]["complete"] is True


def test_exit_codes(k8_path, tmp_path, capsys):
    assert cli_main(["oracle", "--graph", str(tmp_path / "missing.edges")]) == 1
    assert "error:" in capsys.readouterr().err
    assert cli_main(["no-such-command"]) == 2
    assert cli_main([]) == 2
    # a nonsensical guess is a validation error, not a crash
    assert cli_main(["cds-pack", "--graph", k8_path, "--k-guess", "0"]) == 1


def test_stdout_emission(k8_path, capsys):
    rc = cli_main(["oracle", "--graph", k8_path])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["vertex_connectivity"] == 7
