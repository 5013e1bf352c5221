import csv
import json
import subprocess
import sys

import pytest

from citeclust.cli import main
from oracles import BARBELL


def run(argv):
    try:
        return main([str(a) for a in argv])
    except SystemExit as exc:
        return exc.code


@pytest.fixture
def edges(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# barbell\n" + "".join(f"v{a}\tv{b}\n" for a, b in BARBELL))
    return p


@pytest.fixture
def planted_edges(tmp_path):
    from citeclust.graph import generate_planted_partition, write_edgelist

    p = tmp_path / "planted.txt"
    write_edgelist(generate_planted_partition(4, 30, 0.4, 0.02, seed=0).graph, p)
    return p


def test_stats(edges, capsys):
    assert run(["stats", "--in", edges]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc == {"n": 6, "m": 7, "k": 2.33333, "lcc": 1.0, "dropped": 0}


def test_cluster_replications(edges, tmp_path):
    out = tmp_path / "o"
    assert run(["cluster", "--in", edges, "--method", "louvain", "--reps", 10, "--seed", 7,
                "--out-dir", out, "--jobs", 1]) == 0
    assert len(list(out.glob("clustering_*.txt"))) == 10
    summary = json.loads((out / "summary.json").read_text())
    assert summary["metrics"]["Q"] == {"mean": 0.357143, "std": 0.0}
    rep = json.loads((out / "metrics_3.json").read_text())
    assert rep["seed"] == 10
    for f in out.iterdir():
        assert f.read_text().endswith("\n")


def test_cluster_is_reproducible(planted_edges, tmp_path):
    for d in ("a", "b"):
        assert run(["cluster", "--in", planted_edges, "--method", "lpa", "--reps", 2,
                    "--out-dir", tmp_path / d, "--jobs", 1]) == 0
    for f in (tmp_path / "a").iterdir():
        if f.name != "provenance.json":
            assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_cluster_parallel_matches_serial(planted_edges, tmp_path):
    for d, jobs in (("a", 1), ("b", 2)):
        assert run(["cluster", "--in", planted_edges, "--method", "louvain", "--reps", 2,
                    "--out-dir", tmp_path / d, "--jobs", jobs]) == 0
    for f in (tmp_path / "a").glob("clustering_*"):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_cluster_post_reports_pairs(planted_edges, tmp_path):
    out = tmp_path / "o"
    assert run(["cluster", "--in", planted_edges, "--method", "metimap", "--post",
                "--out-dir", out, "--jobs", 1]) == 0
    rep = json.loads((out / "metrics_0.json").read_text())
    assert set(rep) >= {"pre", "post"}
    assert (out / "clustering_0.pre.txt").exists()
    assert set(json.loads((out / "summary.json").read_text())) >= {"pre", "post"}


@pytest.mark.parametrize(
    "flags",
    [
        ["--method", "louvain", "--clusters", 3],
        ["--method", "lpa", "--resolution", 2],
        ["--method", "bogus"],
        ["--method", "louvain", "--reps", 0],
        ["--method", "louvain", "--s-tiny", 3],
        ["--method", "kway", "--clusters", 0],
    ],
)
def test_cluster_bad_flags(edges, tmp_path, flags):
    out = tmp_path / "o"
    assert run(["cluster", "--in", edges, "--out-dir", out] + flags) == 2
    assert not out.exists()


def test_cluster_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("a b\nc\n")
    assert run(["cluster", "--in", bad, "--method", "louvain", "--out-dir", tmp_path / "o"]) == 1
    assert "bad.txt:2" in capsys.readouterr().err


def test_missing_input(tmp_path):
    assert run(["stats", "--in", tmp_path / "nope.txt"]) == 1


def test_eval_json_and_csv(edges, tmp_path, capsys):
    c = tmp_path / "c.txt"
    c.write_text("v0 0\nv1 0\nv2 0\nv3 1\nv4 1\nv5 1\n")
    assert run(["eval", "--in", edges, "--clustering", c]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["K"] == 2 and doc["E"] == 0.333333 and doc["Q"] == 0.357143
    assert doc["logL"] == pytest.approx(-3.1395, abs=1e-4)
    assert "T_sec" not in doc
    assert run(["eval", "--in", edges, "--clustering", c, "--csv", "--runtime", 1.5]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0][0] == "clusters" and rows[0][-1] == "T_sec"
    assert rows[1][-1] == "1.5"


def test_eval_picks_up_runtime(edges, tmp_path, capsys):
    out = tmp_path / "o"
    run(["cluster", "--in", edges, "--method", "mapeq", "--out-dir", out])
    assert run(["eval", "--in", edges, "--clustering", out / "clustering_0.txt", "--no-d90"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "T_sec" in doc and "D90" not in doc


def test_eval_missing_node(edges, tmp_path):
    c = tmp_path / "c.txt"
    c.write_text("v0 0\nv1 0\nv2 0\nv3 1\nv4 1\n")
    assert run(["eval", "--in", edges, "--clustering", c]) == 3


def test_compare_files(edges, tmp_path):
    c = tmp_path / "c.txt"
    c.write_text("v0 0\nv1 0\nv2 0\nv3 1\nv4 1\nv5 1\n")
    out = tmp_path / "o"
    assert run(["compare", c, c, "--out-dir", out]) == 0
    rows = list(csv.reader((out / "distances.csv").read_text().splitlines()))
    assert [r[1:] for r in rows[1:]] == [["0", "0"], ["0", "0"]]


def test_compare_classes(tmp_path):
    files = []
    for i, lab in enumerate(["0 0 1 1", "0 0 1 1", "0 1 0 1", "0 1 1 0"]):
        p = tmp_path / f"c{i}.txt"
        p.write_text("".join(f"n{j} {x}\n" for j, x in enumerate(lab.split())))
        files.append(p)
    out = tmp_path / "o"
    assert run(["compare", *files, "--classes", "2", "--out-dir", out]) == 0
    assert (out / "classes_k2.csv").exists() and (out / "heatmap_k2.svg").exists()
    assert run(["compare", *files, "--classes", "5", "--out-dir", tmp_path / "x"]) == 2


def test_compare_mismatched_inputs(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("x 0\ny 1\n")
    b.write_text("x 0\ny 1\nz 1\n")
    assert run(["compare", a, b, "--out-dir", tmp_path / "o"]) == 3


def test_compare_robustness(planted_edges, tmp_path):
    out = tmp_path / "o"
    assert run(["compare", "--in", planted_edges, "--method", "louvain", "--robustness", "0,0.1,0.2",
                "--reps", 5, "--out-dir", out]) == 0
    rows = (out / "robustness_louvain.csv").read_text().splitlines()
    assert rows[0] == "alpha,v_norm" and len(rows) == 4
    assert (out / "uncertainty.csv").read_text().startswith("method,U\n")


def test_compare_methods_matrix(planted_edges, tmp_path):
    out = tmp_path / "o"
    assert run(["compare", "--in", planted_edges, "--methods", "louvain,lpa,mapeq", "--out-dir", out,
                "--classes", "2"]) == 0
    assert len((out / "distances.csv").read_text().splitlines()) == 4


def test_env_seed(edges, tmp_path, monkeypatch):
    monkeypatch.setenv("CITECLUST_SEED", "42")
    out = tmp_path / "o"
    assert run(["cluster", "--in", edges, "--method", "lpa", "--out-dir", out]) == 0
    assert json.loads((out / "metrics_0.json").read_text())["seed"] == 42
    monkeypatch.setenv("CITECLUST_SEED", "abc")
    assert run(["stats", "--in", edges]) == 2


def test_module_entry_point(edges):
    r = subprocess.run([sys.executable, "-m", "citeclust", "stats", "--in", str(edges)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and '"m": 7' in r.stdout
