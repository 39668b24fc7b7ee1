import json

import pytest

from stablenet.cli import EXIT_ERROR, EXIT_FAIL, EXIT_OK, main
from stablenet.expr import NOT_NO_ROUTE, LenCmp, conj
from stablenet.network import Interfaces, save_document

from conftest import needs_solver


@pytest.fixture()
def fig1(tmp_path):
    assert main(["gen", "--example", "fig1", "--out", str(tmp_path)]) == EXIT_OK
    return tmp_path


def test_gen_example(fig1):
    names = sorted(p.name for p in fig1.iterdir())
    assert names == ["fig1_cbgraph.json", "fig1_pkg1.json", "fig1_pkg2.json"]
    g = json.loads((fig1 / "fig1_cbgraph.json").read_text())
    assert g["roots"] == ["A"]


def test_gen_fattree_all(tmp_path, capsys):
    assert main(["gen", "--fattree", "4", "--variant", "all", "--out", str(tmp_path)]) == EXIT_OK
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == ["fattree4_Hijack.json", "fattree4_PathLength.json",
                     "fattree4_Reachability.json", "fattree4_ValleyFree.json"]
    doc = json.loads((tmp_path / "fattree4_PathLength.json").read_text())
    assert doc["dist"]["edge0_0"] == 0


def test_usage_errors(tmp_path, capsys):
    assert main([]) == EXIT_ERROR
    assert main(["verify", "--net", str(tmp_path / "nope.json")]) == EXIT_ERROR
    assert "no such file" in capsys.readouterr().err
    assert main(["gen", "--fattree", "3", "--out", str(tmp_path)]) == EXIT_ERROR
    assert main(["verify", "--net", "x", "--jobs", "0"]) == EXIT_ERROR
    assert main(["--help"]) == EXIT_OK


def test_missing_solver(fig1, capsys):
    rc = main(["verify", "--net", str(fig1 / "fig1_pkg2.json"), "--solver", "/no/such/z3"])
    assert rc == EXIT_ERROR
    assert "not found" in capsys.readouterr().err


def test_malformed_document(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"nodes": ["a"], "edges": [["a", "b"]]}')
    assert main(["simulate", "--net", str(p)]) == EXIT_ERROR


@needs_solver
def test_verify_correct(fig1, tmp_path, capsys):
    out = tmp_path / "verdict.json"
    rc = main(["verify", "--net", str(fig1 / "fig1_pkg2.json"), "--json", str(out), "--jobs", "4"])
    assert rc == EXIT_OK
    assert capsys.readouterr().out.startswith("Correct")
    assert json.loads(out.read_text())["status"] == "Correct"


@needs_solver
def test_verify_fail_prints_triage(running, tmp_path, capsys):
    net, _, p2 = running
    Y = dict(p2.Y, E=conj(NOT_NO_ROUTE, LenCmp("=", 1)))
    p = tmp_path / "bad.json"
    save_document(p, net, Interfaces(p2.I, p2.Q, Y))
    assert main(["verify", "--net", str(p)]) == EXIT_FAIL
    assert "Prop(E)" in capsys.readouterr().out


@needs_solver
def test_verify_json_format(fig1, capsys):
    rc = main(["verify", "--net", str(fig1 / "fig1_pkg1.json"), "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] in ("Correct", "Fail")
    assert rc == (EXIT_OK if doc["status"] == "Correct" else EXIT_FAIL)


@needs_solver
def test_dump_smt(fig1, tmp_path):
    d = tmp_path / "dump"
    main(["verify", "--net", str(fig1 / "fig1_pkg2.json"), "--dump-smt", str(d)])
    assert (d / "Inv_A-B.smt2").is_file()


def test_tolerance_with_given_graph(fig1, capsys):
    rc = main(["tolerance", "--net", str(fig1 / "fig1_pkg2.json"),
               "--cbgraph", str(fig1 / "fig1_cbgraph.json"), "--k", "1", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert rc == EXIT_FAIL
    assert doc["perNode"] == {"A": "unbounded", "B": 0, "E": 0, "C": 0}
    assert doc["forK"] is False


@needs_solver
def test_tolerance_synthesized(fig1, capsys):
    rc = main(["tolerance", "--net", str(fig1 / "fig1_pkg1.json"), "--k", "1", "--jobs", "4"])
    assert rc == EXIT_OK
    assert "1-fail-connected: yes" in capsys.readouterr().out


@needs_solver
def test_synth(fig1, tmp_path, capsys):
    out = tmp_path / "solved.json"
    rc = main(["synth", "--net", str(fig1 / "fig1_pkg2.json"),
               "--cbgraph", str(fig1 / "fig1_cbgraph.json"), "--out", str(out)])
    assert rc == EXIT_OK
    assert "round trip: Correct" in capsys.readouterr().out
    assert main(["verify", "--net", str(out)]) in (EXIT_OK, EXIT_FAIL)


def test_simulate(fig1, tmp_path, capsys):
    trace = tmp_path / "trace.json"
    rc = main(["simulate", "--net", str(fig1 / "fig1_pkg2.json"), "--seed", "3",
               "--horizon", "30", "--fail", "A->C", "--cutoff", "2", "--trace", str(trace)])
    assert rc == EXIT_OK
    doc = json.loads(trace.read_text())
    assert set(doc) == {"A", "B", "C", "E"} and len(doc["A"]) == 31
    assert "state at t=30" in capsys.readouterr().out


def test_simulate_rejects_unknown_edge(fig1):
    rc = main(["simulate", "--net", str(fig1 / "fig1_pkg2.json"), "--fail", "A->E"])
    assert rc == EXIT_ERROR
