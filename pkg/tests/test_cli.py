import csv
import io
import json
import time

import pytest

from vacantlab.cli import main
from vacantlab.graphgen import read_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_usage_errors_exit_one(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "nope")[0] == 1
    assert run(capsys, "predict", "--model", "lazy")[0] == 1
    assert run(capsys, "predict", "--model", "edge", "--r", "5")[0] == 1
    assert run(capsys, "sweep", "--seeds", "0")[0] == 1


def test_gen_writes_edge_list(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code, _, err = run(capsys, "gen", "--n", "50", "--r", "3", "--graph", "simple",
                       "--seed-base", "4", "--out", str(out))
    assert code == 0 and "simple=True" in err
    g = read_edge_list(out)
    assert g.n == 50 and g.m == 75
    code, text, _ = run(capsys, "gen", "--n", "4", "--r", "3", "--graph", "simple")
    assert text.splitlines() == ["4 3", "0 1", "0 2", "0 3", "1 2", "1 3", "2 3"]


def test_predict_csv_and_discrepancy_row(capsys):
    code, text, _ = run(capsys, "predict", "--model", "nbw", "--r", "3", "--n", "1000",
                        "--show-discrepancies")
    table = rows(text)
    assert code == 0 and table[0] == ["model", "quantity", "r", "n", "t", "value"]
    q = {r[1]: float(r[5]) for r in table[1:]}
    assert q["threshold_set"] == pytest.approx(3000 * 0.6931471805599453)
    assert "threshold_set_as_displayed" in q


def test_walk_snapshots_and_trajectory(tmp_path, capsys):
    traj = tmp_path / "t.txt"
    code, text, _ = run(capsys, "walk", "--model", "edge", "--r", "4", "--n", "200",
                        "--checkpoints", "50,400", "--trajectory", str(traj), "--steps", "50")
    table = rows(text)
    assert code == 0 and table[0] == ["t", "visited_vertices", "visited_edges",
                                      "d0", "d1", "d2", "d3", "d4"]
    assert [r[0] for r in table[1:]] == ["50", "400"]
    lines = traj.read_text().splitlines()
    assert len(lines) == 50 and lines[0].split()[-1] in ("red", "blue")


def test_sweep_writes_reports_and_config_overrides(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("# experiment\nmodel = nbw\nn = 3000\nseeds = 2\nnice_only = true\n")
    out = tmp_path / "rep"
    code, text, _ = run(capsys, "sweep", "--model", "simple", "--config", str(cfg),
                        "--checkpoints", "0,2000", "--out", str(out), "--format", "jsonl")
    assert code == 0
    first = json.loads((out / "summary.jsonl").read_text().splitlines()[0])
    assert set(first) == {"t", "quantity", "mean", "stddev", "median", "min", "max", "count"}
    comp = [json.loads(x) for x in (out / "comparison.jsonl").read_text().splitlines()]
    size = [c for c in comp if c["quantity"] == "vacant_set_size" and c["t"] == 2000][0]
    # the config file switched the model to the non-backtracking walk
    assert size["predicted"] == pytest.approx(3000 * 0.513417119032592)


def test_threshold_and_cover(capsys):
    code, text, _ = run(capsys, "threshold", "--model", "nbw", "--n", "10000", "--seeds", "2")
    table = rows(text)
    assert code == 0 and float(table[1][-1]) < 0.1
    code, text, _ = run(capsys, "cover", "--models", "edge", "--r-list", "4,5", "--n", "1000",
                        "--seeds", "2", "--format", "jsonl")
    recs = [json.loads(x) for x in text.splitlines()]
    assert code == 0 and [r["r"] for r in recs] == [4, 5]


def test_validate_exit_codes(monkeypatch, capsys):
    code, text, _ = run(capsys, "validate", "--only", "4,5")
    assert code == 0 and text.count("[PASS]") == 2
    from vacantlab import theory
    monkeypatch.setattr(theory, "threshold", lambda m, o: 1.0)
    code, text, _ = run(capsys, "validate", "--only", "5")
    assert code == 2 and "[FAIL]" in text


def test_quick_profile_is_fast(capsys):
    t0 = time.perf_counter()
    main(["validate", "--profile", "quick"])
    text = capsys.readouterr().out
    assert time.perf_counter() - t0 < 120
    assert len([x for x in text.splitlines() if x.startswith("[")]) == 14
