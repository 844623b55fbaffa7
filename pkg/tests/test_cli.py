from __future__ import annotations

import json
import subprocess
import sys

import networkx as nx
import pytest

from dbal.cli import main
from dbal.graphcore import generate, parse_graph6

from conftest import to_nx


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_k3(capsys):
    code, out, _ = run(capsys, "analyze", "--g6", "Bw")
    assert code == 0
    assert "highly distance-balanced: yes" in out


def test_analyze_path_profile(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "path", "--n", "4", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [(r["l"], r["verdict"]) for r in doc["graph"]["profile"]] == [(1, "unbalanced"), (2, "unbalanced"), (3, "balanced")]
    assert doc["graph"]["profile"][0]["witness"] == [0, 1]


def test_analyze_wheel(capsys):
    code, out, _ = run(capsys, "analyze", "--family", "wheel", "--n", "6")
    assert code == 0
    assert "l=2: balanced" in out
    assert "diameter-2 classification: nonregular-join-of-regulars" in out


def test_analyze_text_and_json_agree(capsys):
    _, text, _ = run(capsys, "analyze", "K2,3")
    _, js, _ = run(capsys, "analyze", "K2,3", "--format", "json")
    doc = json.loads(js)["graph"]
    for row in doc["profile"]:
        assert f"l={row['l']}: {row['verdict']}" in text
    assert doc["join_classification"] in text


def test_analyze_errors(capsys):
    assert run(capsys, "analyze", "--g6", "B!")[0] == 2
    assert run(capsys, "analyze", "--g6", "A?")[0] == 3
    assert run(capsys, "analyze", "--family", "cycle")[0] == 2
    assert run(capsys, "analyze")[0] == 2


def test_analyze_edge_file(tmp_path, capsys):
    f = tmp_path / "p.txt"
    f.write_text("4 3\n0 1\n1 2\n2 3\n")
    code, out, _ = run(capsys, "analyze", "--edges", str(f))
    assert code == 0 and "diameter=3" in out


def test_product_cartesian(capsys):
    code, out, err = run(capsys, "product", "cartesian", "K2", "C4")
    assert code == 0
    assert parse_graph6(out.strip()).n == 8
    assert "distance-formula check: pass" in err


def test_product_corona_is_p4(capsys, tmp_path):
    dest = tmp_path / "x.g6"
    code, out, _ = run(capsys, "product", "corona", "K2", "K1", "--out", str(dest))
    assert code == 0
    X = parse_graph6(dest.read_text())
    assert nx.is_isomorphic(to_nx(X), nx.path_graph(4))
    assert "n=4" in out


def test_product_lexicographic_unit(capsys):
    H = generate("cycle", 5)
    code, out, _ = run(capsys, "product", "lexicographic", "K1", H.graph6)
    assert code == 0 and parse_graph6(out.strip()) == H


def test_product_budget(capsys):
    code, _, err = run(capsys, "product", "cartesian", "K8", "K8", "--budget", "vertices=60")
    assert code == 2 and "budget" in err


def test_product_json(capsys):
    code, out, _ = run(capsys, "product", "lexicographic", "P4", "K2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["n"] == 8 and doc["distance_formula"] == "pass" and doc["diameter"] == 3


def test_verify_single_instance(capsys, tmp_path):
    g, h = tmp_path / "G.g6", tmp_path / "H.g6"
    g.write_text("Ch\n")
    h.write_text("A_\n")
    code, out, _ = run(capsys, "verify", "--check", "lex-3.2", "--g", str(g), "--h", str(h), "--l", "3")
    assert code == 0 and "[pass] lex-3.2" in out


def test_verify_not_applicable_exit(capsys):
    assert run(capsys, "verify", "--check", "lex-3.2", "--g", "K3", "--h", "K2", "--l", "3")[0] == 3
    assert run(capsys, "verify", "--check", "cor-4.2", "--g", "C5")[0] == 3


def test_verify_counterexample_exit(capsys):
    code, out, _ = run(capsys, "verify", "--check", "claim-4.4", "--g", "P4", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["summary"]["failed"] == 1
    assert doc["instances"][0]["witness"]["replay"].startswith("dbal verify")


def test_verify_input_errors(capsys):
    assert run(capsys, "verify", "--check", "bogus", "--g", "K3")[0] == 2
    assert run(capsys, "verify", "--check", "prop-6.1", "--sweep", "foo")[0] == 2
    assert run(capsys, "verify", "--check", "prop-6.1")[0] == 2
    assert run(capsys, "verify", "--check", "eq-1", "--h", "P3")[0] == 2
    assert run(capsys, "verify", "--check", "prop-6.1", "--sweep", "connected:n<=4", "--jobs", "0")[0] == 2


def test_verify_empty_source(capsys, tmp_path):
    f = tmp_path / "empty.g6"
    f.write_text("")
    code, out, _ = run(capsys, "verify", "--check", "prop-6.1", "--g", str(f), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["summary"]["checked"] == 0


def test_verify_sweep_json_schema(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--check", "prop-6.1", "--sweep", "connected:n<=5",
                     "--format", "json", "--out", str(dest))
    doc = json.loads(dest.read_text())
    assert code == 0
    assert list(doc) == ["tool_version", "command", "instances", "summary", "wall_time_ms"]
    assert list(doc["summary"])[:3] == ["checked", "skipped", "failed"]
    assert doc["summary"]["failed"] == 0 and doc["summary"]["checked"] > 0


def test_verify_text_matches_json(capsys):
    _, text, _ = run(capsys, "verify", "--check", "thm-4.4ii", "--sweep", "G:n<=3,H:n<=2")
    _, js, _ = run(capsys, "verify", "--check", "thm-4.4ii", "--sweep", "G:n<=3,H:n<=2", "--format", "json")
    s = json.loads(js)["summary"]
    assert f"checked={s['checked']} skipped={s['skipped']} failed={s['failed']}" in text
    assert s["digest"] in text


def test_verify_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("DBAL_JOBS", "2")
    _, a, _ = run(capsys, "verify", "--check", "prop-6.1", "--sweep", "connected:n<=5", "--format", "json")
    monkeypatch.delenv("DBAL_JOBS")
    _, b, _ = run(capsys, "verify", "--check", "prop-6.1", "--sweep", "connected:n<=5", "--format", "json")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "wall_time_ms"}
    assert strip(a) == strip(b)


def test_verify_all_instances(capsys):
    _, out, _ = run(capsys, "verify", "--check", "prop-6.1", "--sweep", "connected:n<=3",
                    "--format", "json", "--all-instances")
    doc = json.loads(out)
    assert len(doc["instances"]) == doc["summary"]["checked"] + doc["summary"]["skipped"]


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "4")
    assert code == 0 and len(out.split()) == 38
    assert run(capsys, "enumerate", "--n", "9")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dbal", "analyze", "C5"], capture_output=True, text=True)
    assert res.returncode == 0 and "highly distance-balanced: yes" in res.stdout


@pytest.mark.parametrize("argv", [["--version"], ["analyze", "--help"]])
def test_help_and_version(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
