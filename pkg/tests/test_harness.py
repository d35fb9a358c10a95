import math

import numpy as np
import pytest

from vacantlab import harness, theory
from vacantlab.harness import (COMPARISON_COLUMNS, SUMMARY_COLUMNS, ExperimentConfig,
                               NoCrossingError, aggregate, bootstrap_ci, cover_time_study,
                               format_table, q_crossing, run_experiment, run_replicas,
                               threshold_scan, validate)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig("simple", 3, 100, [])
    with pytest.raises(ValueError):
        ExperimentConfig("simple", 3, 100, [0], checkpoints=[5, 1])
    with pytest.raises(ValueError):
        ExperimentConfig("simple", 3, 100, [0], clock="wall")
    cfg = ExperimentConfig("nbw", 3, 1000, [0])
    cps = cfg.resolved_checkpoints()
    assert len(cps) == 20 and cps[-1] == round(2 * 3 * math.log(2) * 1000)


def test_single_seed_at_zero_is_the_initial_state():
    cfg = ExperimentConfig("simple", 3, 500, [4], checkpoints=[0])
    rep = run_experiment(cfg)
    assert rep.value(0, "vacant_set_size") == 499
    assert rep.value(0, "vacant_net_size") == 750
    assert rep.value(0, "total_steps") == 0
    assert rep.value(0, "vacant_set_C1") <= 499


def _files(tmp, cfg):
    rep = aggregate(cfg, run_replicas(cfg))
    return {p.name: p.read_bytes() for p in rep.write(tmp)}


def test_reports_are_byte_identical_and_seed_order_free(tmp_path):
    kw = dict(checkpoints=[0, 500, 1500, 4000], graph="simple")
    a = _files(tmp_path / "a", ExperimentConfig("simple", 3, 2000, [1, 2, 3, 4], **kw))
    b = _files(tmp_path / "b", ExperimentConfig("simple", 3, 2000, [1, 2, 3, 4], **kw))
    c = _files(tmp_path / "c", ExperimentConfig("simple", 3, 2000, [4, 2, 1, 3], **kw))
    assert a == b == c
    assert set(a) == {"summary.csv", "comparison.csv", "components_vacant_set.csv",
                      "components_vacant_net.csv"}
    head = a["summary.csv"].decode().splitlines()[0]
    assert head == ",".join(SUMMARY_COLUMNS)
    assert a["comparison.csv"].decode().splitlines()[0] == ",".join(COMPARISON_COLUMNS)


def test_thread_count_does_not_change_results(monkeypatch):
    cfg = ExperimentConfig("edge", 4, 1000, [0, 1, 2], checkpoints=[100, 900], clock="red")
    monkeypatch.setenv("VACANTLAB_THREADS", "1")
    a = [r.values for r in run_replicas(cfg)]
    monkeypatch.setenv("VACANTLAB_THREADS", "3")
    assert [r.values for r in run_replicas(cfg)] == a


def test_replica_failures_are_recorded(monkeypatch):
    real = harness.sample_graph

    def flaky(n, r, seed, graph="configuration"):
        if seed == 2:
            raise RuntimeError("boom")
        return real(n, r, seed, graph)

    monkeypatch.setattr(harness, "sample_graph", flaky)
    cfg = ExperimentConfig("simple", 3, 200, [1, 2, 3], checkpoints=[10])
    rep = aggregate(cfg, run_replicas(cfg))
    assert rep.failures == [(2, "RuntimeError: boom")]
    assert rep.value(10, "vacant_set_size", "count") == 2
    with pytest.raises(RuntimeError):
        run_replicas(ExperimentConfig("simple", 3, 200, [2], checkpoints=[10]))


def test_comparison_rows():
    cfg = ExperimentConfig("simple", 3, 20_000, [0, 1, 2], checkpoints=[40_000], graph="simple")
    rep = run_experiment(cfg)
    row = [r for r in rep.comparison if r[0] == "vacant_set_size"][0]
    assert row[3] == pytest.approx(20_000 * math.exp(-1))
    assert row[4] == pytest.approx(abs(row[2] - row[3]) / row[3])
    assert row[5] and row[6] == 0.02


def test_red_clock_comparison_uses_red_steps():
    cfg = ExperimentConfig("edge", 4, 5000, [0, 1], checkpoints=[5000], clock="red")
    rep = run_experiment(cfg)
    net = [r for r in rep.comparison if r[0] == "vacant_net_size"][0]
    assert net[2] == net[3] == 5000


def test_format_table_jsonl():
    text = format_table(["a", "b"], [[1, 0.5], [np.int64(2), True]], "jsonl")
    assert text == '{"a": 1, "b": 0.5}\n{"a": 2, "b": 1}\n'


def test_q_crossing_and_bootstrap():
    assert q_crossing([0, 10, 20], [5.0, 1.0, -3.0]) == pytest.approx(12.5)
    assert math.isnan(q_crossing([0, 10], [1.0, 2.0]))
    lo, hi = bootstrap_ci([1.0, 2.0, 3.0, 4.0])
    assert 1 <= lo < 2.5 < hi <= 4
    assert all(math.isnan(x) for x in bootstrap_ci([]))


def test_threshold_scan_small():
    cfg = ExperimentConfig("nbw", 3, 20_000, [0, 1], grid=[0.8 + 0.04 * i for i in range(11)],
                           grid_object="vacant_set", graph="simple")
    scan = threshold_scan(cfg)
    assert scan.relative_error < 0.05
    assert scan.q_ci[0] <= scan.q_crossing <= scan.q_ci[1]
    with pytest.raises(NoCrossingError):
        threshold_scan(cfg, t_grid=[0, 100, 200])


def test_cover_time_study_table():
    rows = cover_time_study(["edge"], [4, 5], [2000], [0, 1])
    assert [r[1] for r in rows] == [4, 5]
    assert rows[0][11] == 4000 and math.isnan(rows[1][11])
    assert rows[0][-1] == 0


def test_edge_process_cover_time_tracks_d():
    rows = cover_time_study(["edge"], [4], [20_000], [0, 1, 2], graph="simple")
    assert abs(rows[0][6] - 2) < 0.1


def test_validate_quick_subset_passes():
    status, results = validate("quick", only=["4", "5", "9"], echo=None)
    assert status == 0 and [r.key for r in results] == ["4", "5", "9"]


def test_tampering_with_a_threshold_fails_validation(monkeypatch):
    real = theory.threshold

    def off(model, obj):
        v = real(model, obj)
        return v * 1.05 if obj == "vacant_net" else v

    monkeypatch.setattr(theory, "threshold", off)
    status, results = validate("quick", only=["4"], echo=None)
    assert status == 2 and not results[0].passed
