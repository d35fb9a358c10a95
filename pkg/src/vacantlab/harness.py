"""Seeded Monte Carlo experiments: sweeps, threshold scans, cover-time studies.

Each replica gets its own graph and walk drawn from streams keyed by its
seed, so results do not depend on worker scheduling or on seed order.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import theory
from .graphgen import nice_depth, nice_mask, sample_regular_configuration, sample_simple_regular
from .rng import BOOTSTRAP, GRAPH, WALK, make_rng
from .structure import (COMPONENT_COLUMNS, ComponentRow, ComponentSummary, CriticalityConfig,
                        Phase, analyse, classify, vacant_net_subgraph, vacant_set_subgraph)
from .walks import WalkKind, advance, advance_red, cover_times, init_walk

log = logging.getLogger(__name__)

SIZE_QUANTITIES = ("vacant_set_size", "vacant_set_edges", "vacant_net_size")
COMPONENT_QUANTITIES = ("vacant_set_components", "vacant_net_components")
DEFAULT_QUANTITIES = SIZE_QUANTITIES + COMPONENT_QUANTITIES
DEFAULT_GRID = tuple(round(0.1 * i, 10) for i in range(1, 21))
PHASE_CODE = {Phase.SUB_CRITICAL: -1, Phase.WINDOW: 0, Phase.SUPER_CRITICAL: 1}

SUMMARY_COLUMNS = ["t", "quantity", "mean", "stddev", "median", "min", "max", "count"]
COMPARISON_COLUMNS = ["quantity", "t", "empirical_mean", "predicted", "relative_error",
                      "passed", "tolerance"]


def worker_count() -> int:
    env = os.environ.get("VACANTLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def map_replicas(fn: Callable, items: Sequence) -> list:
    """Apply ``fn`` to each item in a thread pool (kernels release the GIL);
    results come back in input order."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, items))


def sample_graph(n: int, r: int, seed: int, graph: str = "configuration"):
    rng = make_rng(seed, GRAPH)
    if graph == "simple":
        return sample_simple_regular(n, r, rng)
    if graph == "configuration":
        return sample_regular_configuration(n, r, rng)
    raise ValueError(f"unknown graph mode {graph!r}")


@dataclass
class ExperimentConfig:
    """What to simulate and record.

    Checkpoints are either explicit steps or ``grid`` multiples of the
    predicted threshold of ``grid_object`` times ``n``. With ``clock="red"``
    (edge-process) checkpoints count red steps.
    """

    kind: WalkKind | str
    r: int
    n: int
    seeds: list[int]
    checkpoints: list[int] | None = None
    grid: Sequence[float] | None = None
    grid_object: str = "vacant_set"
    quantities: Sequence[str] = DEFAULT_QUANTITIES
    criticality: CriticalityConfig = field(default_factory=CriticalityConfig)
    out_dir: str | None = None
    nice_only: bool = False
    clock: str = "total"
    graph: str = "configuration"
    size_tolerance: float = 0.02

    def __post_init__(self):
        self.kind = WalkKind.parse(self.kind)
        self.seeds = [int(s) for s in self.seeds]
        if not self.seeds:
            raise ValueError("need at least one seed")
        if self.clock not in ("total", "red"):
            raise ValueError("clock must be 'total' or 'red'")
        if self.checkpoints is not None:
            cps = [int(c) for c in self.checkpoints]
            if any(b < a for a, b in zip(cps, cps[1:])):
                raise ValueError("checkpoints must be sorted")
            self.checkpoints = cps

    @property
    def model(self) -> theory.WalkModel:
        return theory.WalkModel(self.kind, self.r)

    def resolved_checkpoints(self) -> list[int]:
        if self.checkpoints is not None:
            return list(self.checkpoints)
        grid = DEFAULT_GRID if self.grid is None else self.grid
        base = theory.threshold(self.model, self.grid_object) * self.n
        return sorted(int(round(g * base)) for g in grid)


@dataclass
class ReplicaResult:
    seed: int
    values: dict[int, dict[str, float]]
    rows: dict[str, list[ComponentRow]]
    error: str | None = None


def _object_row(g, tracker, obj: str, t: int, mask) -> ComponentRow:
    if obj == "vacant_set":
        sub = vacant_set_subgraph(g, tracker)
        hist = None
        if mask is not None:
            keep = mask[sub.vertices]
            hist = np.bincount(sub.degrees()[keep], minlength=int(g.degrees.max()) + 1)
    else:
        sub = vacant_net_subgraph(g, tracker)
        hist = tracker.red_histogram(int(g.degrees.max()), mask)
    row, _ = analyse(sub, t, hist)
    return row


def run_replica(config: ExperimentConfig, seed: int, checkpoints=None) -> ReplicaResult:
    """One graph, one walk, measurements at every checkpoint."""
    cps = config.resolved_checkpoints() if checkpoints is None else checkpoints
    g = sample_graph(config.n, config.r, seed, config.graph)
    state, tracker = init_walk(g, config.kind, 0, make_rng(seed, WALK))
    mask = nice_mask(g, nice_depth(g.n, config.r)) if config.nice_only else None
    values: dict[int, dict[str, float]] = {}
    rows: dict[str, list[ComponentRow]] = {"vacant_set": [], "vacant_net": []}
    for t in cps:
        if config.clock == "red":
            advance_red(state, tracker, g, t)
        else:
            advance(state, tracker, g, t)
        v = {"total_steps": state.t, "red_steps": state.t_red, "blue_steps": state.t_blue,
             "vacant_set_size": g.n - tracker.n_visited_vertices,
             "vacant_net_size": tracker.n_edges - tracker.n_visited_edges}
        if "vacant_set_edges" in config.quantities:
            v["vacant_set_edges"] = vacant_set_subgraph(g, tracker).num_edges
        for obj in ("vacant_set", "vacant_net"):
            if f"{obj}_components" not in config.quantities:
                continue
            row = _object_row(g, tracker, obj, t, mask)
            rows[obj].append(row)
            summ = ComponentSummary(np.zeros(0, dtype=np.int64), row.C1, row.C2, row.components)
            crit = classify(summ, row.subgraph_vertices, g.n, config.criticality)
            v.update({f"{obj}_C1": row.C1, f"{obj}_C2": row.C2, f"{obj}_L": row.L,
                      f"{obj}_Q": row.Q, f"{obj}_R": row.R_stat,
                      f"{obj}_phase": PHASE_CODE[crit.phase]})
        values[t] = v
    return ReplicaResult(seed, values, rows)


def _safe_replica(config, seed, checkpoints=None) -> ReplicaResult:
    try:
        return run_replica(config, seed, checkpoints)
    except Exception as exc:  # recorded, the run continues
        log.warning("replica %s failed: %s", seed, exc)
        return ReplicaResult(seed, {}, {}, f"{type(exc).__name__}: {exc}")


def run_replicas(config: ExperimentConfig, checkpoints=None) -> list[ReplicaResult]:
    results = map_replicas(lambda s: _safe_replica(config, s, checkpoints), config.seeds)
    if all(r.error for r in results):
        raise RuntimeError("all replicas failed: " + "; ".join(r.error for r in results))
    return sorted(results, key=lambda r: r.seed)


@dataclass
class AggregateReport:
    config: ExperimentConfig
    summary: list[list]
    comparison: list[list]
    components: dict[str, list[list]]
    failures: list[tuple[int, str]]

    def value(self, t: int, quantity: str, stat: str = "mean") -> float:
        col = SUMMARY_COLUMNS.index(stat)
        for row in self.summary:
            if row[0] == t and row[1] == quantity:
                return row[col]
        raise KeyError((t, quantity))

    def tables(self) -> dict[str, tuple[list[str], list[list]]]:
        out = {"summary": (SUMMARY_COLUMNS, self.summary),
               "comparison": (COMPARISON_COLUMNS, self.comparison)}
        for obj, rows in self.components.items():
            out[f"components_{obj}"] = (COMPONENT_COLUMNS, rows)
        return out

    def write(self, out_dir, fmt: str = "csv") -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, (cols, rows) in self.tables().items():
            p = out / f"{name}.{'csv' if fmt == 'csv' else 'jsonl'}"
            p.write_text(format_table(cols, rows, fmt))
            paths.append(p)
        return paths


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.12g}")
    if isinstance(x, np.integer):
        return int(x)
    return x


def format_table(columns: Sequence[str], rows: Sequence[Sequence], fmt: str = "csv") -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(dict(zip(columns, map(_fmt, r)))) + "\n" for r in rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _stats(xs: list[float]) -> list[float]:
    a = np.sort(np.asarray(xs, dtype=float))
    return [math.fsum(a) / a.size, float(a.std(ddof=1)) if a.size > 1 else 0.0,
            float(np.median(a)), float(a[0]), float(a[-1]), int(a.size)]


def aggregate(config: ExperimentConfig, results: list[ReplicaResult]) -> AggregateReport:
    ok = [r for r in results if r.error is None]
    cps = sorted({t for r in ok for t in r.values})
    summary, comparison = [], []
    for t in cps:
        names = sorted({q for r in ok for q in r.values.get(t, {})})
        for q in names:
            xs = [r.values[t][q] for r in ok if t in r.values and q in r.values[t]]
            summary.append([t, q, *_stats(xs)])
        means = {q: math.fsum(sorted(r.values[t][q] for r in ok)) / len(ok) for q in names}
        comparison.extend(_compare(config, t, means))
    comps = {}
    for obj in ("vacant_set", "vacant_net"):
        rows = [(row.t, r.seed, row.as_list()) for r in ok for row in r.rows.get(obj, [])]
        if rows:
            comps[obj] = [x[2] for x in sorted(rows, key=lambda x: (x[0], x[1]))]
    fails = [(r.seed, r.error) for r in results if r.error]
    return AggregateReport(config, summary, comparison, comps, fails)


def _compare(config: ExperimentConfig, t: int, means: dict[str, float]) -> list[list]:
    try:
        model = config.model
    except ValueError:
        return []
    clock_t = means.get("red_steps", t) if model.kind is WalkKind.EDGE_PROCESS else t
    out = []
    for q, obj in (("vacant_set_size", "vacant_set"), ("vacant_set_edges", "vacant_set_edges"),
                   ("vacant_net_size", "vacant_net")):
        if q not in means:
            continue
        try:
            pred = theory.expected_size(model, obj, config.n, clock_t)
        except ValueError:
            continue
        err = abs(means[q] - pred) / max(abs(pred), 1.0)
        out.append([q, t, means[q], pred, err, err <= config.size_tolerance,
                    config.size_tolerance])
    return out


def run_experiment(config: ExperimentConfig) -> AggregateReport:
    """Run every replica and aggregate; writes files if ``out_dir`` is set."""
    report = aggregate(config, run_replicas(config))
    if config.out_dir:
        report.write(config.out_dir)
    return report


def bootstrap_ci(xs, seed: int = 0, resamples: int = 2000, level: float = 0.95):
    """Percentile bootstrap interval for the mean."""
    a = np.asarray([x for x in xs if np.isfinite(x)], dtype=float)
    if a.size == 0:
        return (float("nan"), float("nan"))
    if a.size == 1:
        return (float(a[0]), float(a[0]))
    rng = make_rng(seed, BOOTSTRAP)
    idx = rng.integers(0, a.size, size=(resamples, a.size))
    means = a[idx].mean(axis=1)
    lo = (1 - level) / 2
    return (float(np.quantile(means, lo)), float(np.quantile(means, 1 - lo)))


class NoCrossingError(RuntimeError):
    pass


@dataclass
class ThresholdScan:
    obj: str
    predicted: float
    q_crossing: float
    q_ci: tuple[float, float]
    collapse: float
    collapse_ci: tuple[float, float]
    per_seed_q: list[float]
    per_seed_collapse: list[float]

    @property
    def relative_error(self) -> float:
        return abs(self.q_crossing - self.predicted) / self.predicted


def q_crossing(ts: Sequence[int], qs: Sequence[float]) -> float:
    """First + to - sign change of Q, located by linear interpolation."""
    for i in range(1, len(ts)):
        if qs[i - 1] > 0 >= qs[i]:
            t0, t1, q0, q1 = ts[i - 1], ts[i], qs[i - 1], qs[i]
            return t0 + (t1 - t0) * q0 / (q0 - q1)
    return float("nan")


def threshold_scan(config: ExperimentConfig, t_grid=None, obj: str | None = None) -> ThresholdScan:
    """Locate the Q-statistic zero crossing and the last super-critical step.

    ``t_grid`` defaults to ``config.resolved_checkpoints()``.
    """
    obj = obj or config.grid_object
    ts = sorted(int(t) for t in (t_grid if t_grid is not None else config.resolved_checkpoints()))
    quantities = tuple(config.quantities)
    if f"{obj}_components" not in quantities:
        quantities += (f"{obj}_components",)
    cfg = ExperimentConfig(**{**config.__dict__, "quantities": quantities})
    results = [r for r in run_replicas(cfg, ts) if r.error is None]
    per_q, per_c = [], []
    for r in results:
        per_q.append(q_crossing(ts, [r.values[t][f"{obj}_Q"] for t in ts]))
        sup = [t for t in ts if r.values[t][f"{obj}_phase"] == 1]
        per_c.append(float(sup[-1]) if sup else float("nan"))
    if not np.isfinite(per_q).any():
        raise NoCrossingError(f"Q never changes sign on the grid {ts[0]}..{ts[-1]}")
    predicted = theory.threshold(config.model, obj) * config.n
    fq = [x for x in per_q if np.isfinite(x)]
    fc = [x for x in per_c if np.isfinite(x)]
    return ThresholdScan(obj, predicted, float(np.mean(fq)), bootstrap_ci(fq),
                         float(np.mean(fc)) if fc else float("nan"), bootstrap_ci(fc),
                         per_q, per_c)


COVER_COLUMNS = ["model", "r", "n", "replicas", "vertex_mean", "vertex_std", "vertex_over_n",
                 "vertex_over_nlogn", "edge_mean", "edge_over_n", "edge_over_nlogn",
                 "predicted_vertex", "predicted_edge", "budget_exhausted"]


def cover_time_study(models, r_list, n_list, seeds, graph: str = "configuration",
                     budget_factor: float = 40.0) -> list[list]:
    """Normalised vertex and edge cover times for every (model, r, n).

    A replica that exhausts ``budget_factor * n ln n`` steps is counted in
    ``budget_exhausted`` and left out of the means.
    """
    table = []
    for kind in models:
        kind = WalkKind.parse(kind)
        for r in r_list:
            for n in n_list:
                budget = int(budget_factor * n * math.log(n)) + 10 * n

                def one(seed, n=n, r=r, kind=kind, budget=budget):
                    g = sample_graph(n, r, seed, graph)
                    return cover_times(g, kind, 0, make_rng(seed, WALK), budget)

                res = map_replicas(one, list(seeds))
                vs = [v for v, _ in res if v is not None]
                es = [e for _, e in res if e is not None]
                missing = sum(v is None for v, _ in res) + sum(e is None for _, e in res)
                try:
                    model = theory.WalkModel(kind, r)
                    pv = theory.cover_time(model, "vertex", n)
                except ValueError:
                    model, pv = None, float("nan")
                try:
                    pe = theory.cover_time(model, "edge", n) if model else float("nan")
                except ValueError:
                    pe = float("nan")
                nl = n * math.log(n)
                vm = float(np.mean(vs)) if vs else float("nan")
                em = float(np.mean(es)) if es else float("nan")
                table.append([kind.value, r, n, len(res), vm,
                              float(np.std(vs, ddof=1)) if len(vs) > 1 else 0.0,
                              vm / n, vm / nl, em, em / n, em / nl, pv, pe, missing])
    return table


def validate(profile: str = "quick", only=None, echo: Callable[[str], None] | None = print):
    """Run the acceptance suite; returns (exit status, results)."""
    from .validation import run_all
    results = run_all(profile, only=only, echo=echo)
    status = 0 if all(r.passed for r in results) else 2
    return status, results
