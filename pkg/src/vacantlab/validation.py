"""Acceptance criteria, runnable at two scales.

``full`` runs each check at its stated scale; ``quick`` shrinks graphs to
n = 10^4 with 3 seeds (a smoke run, tolerances unchanged).
"""

from __future__ import annotations

import itertools
import math
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from . import theory
from .graphgen import from_edge_list
from .harness import ExperimentConfig, cover_time_study, run_replicas, sample_graph, threshold_scan
from .rng import WALK, make_rng
from .structure import Subgraph, components, scaling_window_probe
from .walks import WalkKind, advance_red, cover_times, init_walk, pregenerated_visits, walk_generate


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    measured: str
    tolerance: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.key:>3} {self.title}: {self.measured} "
                f"(tolerance: {self.tolerance}) [{self.seconds:.1f}s]")


@dataclass(frozen=True)
class Profile:
    name: str
    n_size: int        # criteria 1-3
    n: int             # criteria 6-12
    seeds: int
    window_ns: tuple
    window_seeds: int
    equiv_seeds: int

    def seed_list(self, count: int | None = None) -> list[int]:
        return list(range(self.seeds if count is None else count))

    def majority(self) -> int:
        """Seeds required for an 8-out-of-10 style criterion."""
        return math.ceil(0.8 * self.seeds)


PROFILES = {
    "full": Profile("full", 200_000, 100_000, 10, tuple(2**k for k in range(14, 19)), 20, 10_000),
    "quick": Profile("quick", 10_000, 10_000, 3, tuple(2**k for k in range(10, 15)), 5, 1_000),
}

SIZE_TOL = 0.02
THRESHOLD_TOL = 0.05
COVER_TOL = 0.10
IDENTITY_TOL = 1e-12


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _sizes(kind, n, t, seeds):
    cfg = ExperimentConfig(kind, 3, n, seeds, checkpoints=[t],
                           quantities=("vacant_set_size", "vacant_net_size"), graph="simple")
    res = run_replicas(cfg)
    R = np.mean([r.values[t]["vacant_set_size"] for r in res])
    U = np.mean([r.values[t]["vacant_net_size"] for r in res])
    return R, U


def c1_vacant_set_size(p: Profile):
    n = p.n_size
    R, _ = _sizes("simple", n, 2 * n, p.seed_list())
    pred = theory.expected_size(theory.WalkModel("simple", 3), "vacant_set", n, 2 * n) / n
    err = _rel(R / n, pred)
    return err <= SIZE_TOL, f"|R(2n)|/n = {R / n:.5f} vs {pred:.5f} (rel {err:.4f})", "2%"


def c2_vacant_net_size(p: Profile):
    n = p.n_size
    _, U = _sizes("simple", n, 3 * n, p.seed_list())
    m = 1.5 * n
    pred = theory.expected_size(theory.WalkModel("simple", 3), "vacant_net", n, 3 * n) / m
    err = _rel(U / m, pred)
    return err <= SIZE_TOL, f"|U(3n)|/m = {U / m:.5f} vs {pred:.5f} (rel {err:.4f})", "2%"


def c3_nbw_sizes(p: Profile):
    n = p.n_size
    t = int(round(n * math.log(2)))
    R, U = _sizes("nbw", n, t, p.seed_list())
    model = theory.WalkModel("nbw", 3)
    pr = theory.expected_size(model, "vacant_set", n, t) / n
    pu = theory.expected_size(model, "vacant_net", n, t) / (1.5 * n)
    er, eu = _rel(R / n, pr), _rel(U / (1.5 * n), pu)
    ok = er <= SIZE_TOL and eu <= SIZE_TOL
    return ok, (f"|R|/n = {R / n:.5f} vs {pr:.5f} (rel {er:.4f}); "
                f"|U|/m = {U / (1.5 * n):.5f} vs {pu:.5f} (rel {eu:.4f})"), "2% each"


def c4_threshold_oracle(p: Profile):
    worst = 0.0
    for r in range(3, 65):
        for kind in ("simple", "nbw"):
            model = theory.WalkModel(kind, r)
            for obj in theory.OBJECTS:
                a = theory.threshold(model, obj)
                b = theory.threshold_from_rates(r, *theory.threshold_rate_pair(model, obj))
                worst = max(worst, _rel(a, b))
    edge = theory.threshold(theory.WalkModel("edge", 4), "vacant_set")
    e_err = _rel(edge, 4 / 3)
    ok = worst <= IDENTITY_TOL and e_err <= IDENTITY_TOL
    return ok, f"max rel diff {worst:.2e} over r=3..64; edge u*(d=2) = {edge:.15f}", "1e-12"


def c5_threshold_ratios(p: Profile):
    s, b = theory.WalkModel("simple", 3), theory.WalkModel("nbw", 3)
    rs = theory.threshold(s, "vacant_set") / theory.threshold(b, "vacant_set")
    rn = theory.threshold(s, "vacant_net") / theory.threshold(b, "vacant_net")
    ok = abs(rs - 2) <= IDENTITY_TOL * 2 and abs(rn - 2.5) <= IDENTITY_TOL * 2.5
    return ok, f"set ratio {rs:.15f}, net ratio {rn:.15f}", "1e-12"


def _phases(kind, r, n, seeds, obj, checkpoints, clock="total", graph="simple"):
    cfg = ExperimentConfig(kind, r, n, seeds, checkpoints=checkpoints, clock=clock,
                           quantities=(f"{obj}_components",), graph=graph)
    res = run_replicas(cfg)
    return {t: [r.values[t] for r in res] for t in checkpoints}


def c6_phase_bracketing(p: Profile):
    need = p.majority()
    parts, ok = [], True
    for kind in ("simple", "nbw"):
        for obj in ("vacant_net", "vacant_set"):
            u = theory.threshold(theory.WalkModel(kind, 3), obj)
            lo, hi = int(0.75 * u * p.n), int(1.25 * u * p.n)
            vals = _phases(kind, 3, p.n, p.seed_list(), obj, [lo, hi])
            sup = sum(v[f"{obj}_phase"] == 1 for v in vals[lo])
            sub = sum(v[f"{obj}_phase"] == -1 for v in vals[hi])
            ok &= sup >= need and sub >= need
            parts.append(f"{kind}/{obj[7:]}: super {sup}/{p.seeds}, sub {sub}/{p.seeds}")
    return ok, "; ".join(parts), f">= {need}/{p.seeds} seeds each side"


def c7_q_crossing(p: Profile):
    grid = [round(0.8 + 0.02 * i, 10) for i in range(21)]
    parts, ok = [], True
    for kind, obj in (("simple", "vacant_net"), ("nbw", "vacant_set")):
        cfg = ExperimentConfig(kind, 3, p.n, p.seed_list(), grid=grid, grid_object=obj,
                               quantities=(f"{obj}_components",), graph="simple")
        scan = threshold_scan(cfg)
        err = scan.relative_error
        ok &= err <= THRESHOLD_TOL
        parts.append(f"{kind}/{obj[7:]}: crossing {scan.q_crossing / p.n:.4f}n vs "
                     f"{scan.predicted / p.n:.4f}n (rel {err:.4f})")
    return ok, "; ".join(parts), "5%"


def c8_molloy_reed_sign(p: Profile):
    u = theory.threshold(theory.WalkModel("simple", 3), "vacant_set")
    lo, hi = int(0.75 * u * p.n), int(1.25 * u * p.n)
    vals = _phases("simple", 3, p.n, p.seed_list(), "vacant_set", [lo, hi])
    pos = sum(v["vacant_set_L"] > 0 for v in vals[lo])
    neg = sum(v["vacant_set_L"] < 0 for v in vals[hi])
    need = p.majority()
    return (pos >= need and neg >= need,
            f"L > 0 at 0.75u*n in {pos}/{p.seeds}; L < 0 at 1.25u*n in {neg}/{p.seeds}",
            f">= {need}/{p.seeds} seeds")


def c9_edge_degree_law(p: Profile):
    n, d = p.n, 2
    bound = 3 * math.sqrt(n * math.log(n))
    expected = theory.edge_process_N(n, d, n)
    worst = 0.0
    for seed in p.seed_list():
        g = sample_graph(n, 2 * d, seed, "simple")
        state, tracker = init_walk(g, "edge", 0, make_rng(seed, WALK))
        advance_red(state, tracker, g, n)
        hist = tracker.red_histogram(2 * d)
        worst = max(worst, max(abs(hist[2 * k] - expected[k]) for k in range(d + 1)))
    return worst <= bound, f"max |R_2k - N_k| = {worst:.1f} at t_R = n", f"3 sqrt(n ln n) = {bound:.1f}"


def c10_edge_cover(p: Profile):
    rows = {}
    for r, graph in ((4, "simple"), (6, "configuration")):
        res = [cover_times(sample_graph(p.n, r, s, graph), "edge", 0, make_rng(s, WALK), 50 * p.n)[0]
               for s in p.seed_list()]
        rows[r] = float(np.mean([x for x in res if x is not None])) / p.n \
            if all(x is not None for x in res) else float("nan")
    ok = 1.94 <= rows[4] <= 2.06 and 2.90 <= rows[6] <= 3.10
    return ok, f"r=4: T/n = {rows[4]:.4f}; r=6: T/n = {rows[6]:.4f}", "[1.94, 2.06] and [2.90, 3.10]"


def c11_edge_thresholds(p: Profile):
    n, d = p.n, 2
    need = p.majority()
    u = theory.threshold(theory.WalkModel("edge", 4), "vacant_set")
    lo, hi = int(round(0.75 * u * n)), int(round(1.25 * u * n))
    sv = _phases("edge", 4, n, p.seed_list(), "vacant_set", [lo, hi], clock="red")
    sup = sum(v["vacant_set_phase"] == 1 for v in sv[lo])
    sub = sum(v["vacant_set_phase"] == -1 for v in sv[hi])
    t_net, t_all = int(0.8 * d * n), d * n
    nv = _phases("edge", 4, n, p.seed_list(), "vacant_net", [t_net, t_all], clock="red")
    giant = sum(v["vacant_net_phase"] == 1 for v in nv[t_net])
    bound = 60 * math.log(n)
    gone = sum(v["vacant_net_C1"] <= bound for v in nv[t_all])
    ok = sup >= need and sub >= need and giant >= need and gone >= need
    return ok, (f"set: super {sup}/{p.seeds} at red {lo}, sub {sub}/{p.seeds} at red {hi}; "
                f"net: giant {giant}/{p.seeds} at red {t_net}, gone {gone}/{p.seeds} at edge cover"), \
        f">= {need}/{p.seeds} seeds"


def c12_cover_times(p: Profile):
    rows = cover_time_study(["simple", "nbw"], [3], [p.n], p.seed_list(), graph="simple")
    parts, ok = [], True
    for row in rows:
        kind, vnl, enl = row[0], row[7], row[10]
        model = theory.WalkModel(kind, 3)
        nl = p.n * math.log(p.n)
        pv, pe = theory.cover_time(model, "vertex", p.n) / nl, theory.cover_time(model, "edge", p.n) / nl
        ev, ee = _rel(vnl, pv), _rel(enl, pe)
        ok &= ev <= COVER_TOL and ee <= COVER_TOL
        parts.append(f"{kind}: T_V/(n ln n) = {vnl:.3f} vs {pv:g} (rel {ev:.3f}), "
                     f"T_E/(n ln n) = {enl:.3f} vs {pe:g} (rel {ee:.3f})")
    return ok, "; ".join(parts), "10%"


def c13_scaling_window(p: Profile):
    probe = scaling_window_probe("simple", 3, list(p.window_ns), list(range(p.window_seeds)))
    med = ", ".join(f"{n}:{c:g}" for n, _, _, c in probe.rows)
    return 0.55 <= probe.exponent <= 0.80, f"exponent {probe.exponent:.3f} (median C1 {med})", "[0.55, 0.80]"


def bfs_component_sizes(nv: int, edges) -> list[int]:
    adj = [[] for _ in range(nv)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = [False] * nv
    sizes = []
    for s in range(nv):
        if seen[s]:
            continue
        seen[s] = True
        q, size = deque([s]), 0
        while q:
            v = q.popleft()
            size += 1
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    q.append(w)
        sizes.append(size)
    return sorted(sizes, reverse=True)


def union_find_matches_bfs(max_vertices: int = 6) -> tuple[int, int]:
    """Compare on every edge subset of K_v, v <= max_vertices. Returns
    (cases checked, mismatches)."""
    checked = bad = 0
    for nv in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(nv), 2))
        for mask in range(1 << len(pairs)):
            es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            sub = Subgraph(np.arange(nv), np.array(es, dtype=np.int64).reshape(-1, 2), nv)
            checked += 1
            if list(components(sub).sizes) != bfs_component_sizes(nv, es):
                bad += 1
    return checked, bad


def two_sample_chi2(a, b, bins: int = 20) -> float:
    """p-value of a chi-square homogeneity test on quantile-binned samples."""
    a, b = np.asarray(a), np.asarray(b)
    edges = np.unique(np.quantile(np.concatenate([a, b]), np.linspace(0, 1, bins + 1)))
    edges[-1] += 1
    ca, _ = np.histogram(a, edges)
    cb, _ = np.histogram(b, edges)
    keep = (ca + cb) > 0
    return float(stats.chi2_contingency(np.stack([ca[keep], cb[keep]]))[1])


def lazy_vs_pregenerated(n: int = 1000, r: int = 3, seeds: int = 10_000, kind="simple") -> float:
    lazy = [walk_generate(n, r, kind, s, n)[2].n_visited_vertices
            for s in range(seeds)]
    pre = [pregenerated_visits(n, r, kind, s + 10**6, n) for s in range(seeds)]
    return two_sample_chi2(lazy, pre)


def pairs_process_agreement(n: int = 50, d: int = 2, t: int = 25, seeds: int = 10_000):
    """Largest deviation of the Monte Carlo mean from the exact N_k, in
    standard errors."""
    samples = np.array([theory.pairs_process(n, d, s, t) for s in range(seeds)], dtype=float)
    exact = theory.edge_process_N(n, d, t)
    se = samples.std(axis=0, ddof=1) / math.sqrt(seeds)
    z = np.abs(samples.mean(axis=0) - exact) / np.where(se > 0, se, np.inf)
    return float(z.max())


def c14_oracles(p: Profile):
    checked, bad = union_find_matches_bfs(6)
    pval = lazy_vs_pregenerated(seeds=p.equiv_seeds)
    z = pairs_process_agreement(seeds=p.equiv_seeds)
    ok = bad == 0 and pval > 0.001 and z <= 3
    return ok, (f"union-find vs BFS: {bad} mismatches in {checked}; lazy vs pre-generated "
                f"chi-square p = {pval:.3f}; Pairs-process max |z| = {z:.2f}"), \
        "0 mismatches, p > 0.001, |z| <= 3"


CRITERIA: dict[str, tuple[str, Callable]] = {
    "1": ("vacant-set size, simple walk", c1_vacant_set_size),
    "2": ("vacant-net size, simple walk", c2_vacant_net_size),
    "3": ("non-backtracking sizes", c3_nbw_sizes),
    "4": ("six thresholds vs rate oracle", c4_threshold_oracle),
    "5": ("threshold ratios at r=3", c5_threshold_ratios),
    "6": ("phase bracketing, simple and NBW", c6_phase_bracketing),
    "7": ("Q-statistic zero crossing", c7_q_crossing),
    "8": ("Molloy-Reed sign flip on the vacant set", c8_molloy_reed_sign),
    "9": ("edge-process red-degree law", c9_edge_degree_law),
    "10": ("edge-process vertex cover time", c10_edge_cover),
    "11": ("edge-process thresholds", c11_edge_thresholds),
    "12": ("simple and NBW cover times", c12_cover_times),
    "13": ("scaling-window exponent", c13_scaling_window),
    "14": ("oracle and uniformity properties", c14_oracles),
}


def run_criterion(key: str, profile: str | Profile = "full") -> CriterionResult:
    p = PROFILES[profile] if isinstance(profile, str) else profile
    title, fn = CRITERIA[key]
    t0 = time.perf_counter()
    ok, measured, tol = fn(p)
    return CriterionResult(key, title, bool(ok), measured, tol, time.perf_counter() - t0)


def run_all(profile: str = "quick", only=None, echo: Callable[[str], None] | None = print):
    out = []
    for key in CRITERIA:
        if only and key not in only:
            continue
        res = run_criterion(key, profile)
        if echo:
            echo(res.line())
        out.append(res)
    return out
