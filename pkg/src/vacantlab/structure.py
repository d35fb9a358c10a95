"""Vacant set / vacant net subgraphs, their components, and Molloy-Reed
statistics computed from degree histograms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graphgen import DegreeSequence, HalfEdgeGraph, nice_mask
from .walks import VisitTracker


@dataclass(frozen=True)
class Subgraph:
    """Subgraph with vertices relabelled ``0..len(vertices)-1``.

    ``vertices`` are the parent ids; ``edges`` is ``(k, 2)`` in local ids.
    """

    vertices: np.ndarray
    edges: np.ndarray
    parent_n: int

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.size)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        """Degrees inside the subgraph (a loop counts twice)."""
        return np.bincount(self.edges.ravel(), minlength=self.num_vertices)

    def degree_histogram(self, max_degree: int | None = None) -> np.ndarray:
        d = self.degrees()
        top = int(d.max(initial=0)) if max_degree is None else max_degree
        return np.bincount(d, minlength=top + 1)


def _relabel(parent_n: int, keep: np.ndarray, edges: np.ndarray) -> Subgraph:
    local = np.full(parent_n, -1, dtype=np.int64)
    local[keep] = np.arange(keep.size)
    return Subgraph(keep, local[edges].reshape(-1, 2), parent_n)


def induced_subgraph(g: HalfEdgeGraph, vertex_mask: np.ndarray) -> Subgraph:
    e = g.edges
    keep_e = vertex_mask[e[:, 0]] & vertex_mask[e[:, 1]]
    return _relabel(g.n, np.flatnonzero(vertex_mask), e[keep_e])


def vacant_set_subgraph(g: HalfEdgeGraph, tracker: VisitTracker) -> Subgraph:
    """Graph induced by the unvisited vertices."""
    return induced_subgraph(g, ~tracker.visited_vertices)


def vacant_net_subgraph(g: HalfEdgeGraph, tracker: VisitTracker) -> Subgraph:
    """Graph formed by the unvisited edges and every endpoint of one."""
    red = ~tracker.visited_edges[g.edge_keys]
    e = g.edges[red]
    mask = np.zeros(g.n, dtype=bool)
    mask[e.ravel()] = True
    return _relabel(g.n, np.flatnonzero(mask), e)


@dataclass(frozen=True)
class ComponentSummary:
    sizes: np.ndarray
    C1: int
    C2: int
    component_count: int


def components(sub: Subgraph) -> ComponentSummary:
    """Connected components by union-find; sizes in descending order."""
    nv = sub.num_vertices
    if nv == 0:
        return ComponentSummary(np.zeros(0, dtype=np.int64), 0, 0, 0)
    labels = _kernels.union_find_labels(nv, sub.edges[:, 0].copy(), sub.edges[:, 1].copy())
    sizes = np.bincount(labels)
    sizes = np.sort(sizes[sizes > 0])[::-1]
    c2 = int(sizes[1]) if sizes.size > 1 else 0
    return ComponentSummary(sizes, int(sizes[0]), c2, int(sizes.size))


@dataclass(frozen=True)
class RedDegreeHistogram:
    counts: np.ndarray
    restriction: str = "all"
    excluded: int = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class MomentVector:
    M1: int
    M2: int
    M3: int


def moments_from_histogram(counts) -> MomentVector:
    """M(s) = sum_v C(d(v), s) for s = 1, 2, 3, from counts by degree."""
    c = [int(x) for x in np.asarray(counts)]
    m1 = sum(s * x for s, x in enumerate(c))
    m2 = sum(s * (s - 1) // 2 * x for s, x in enumerate(c))
    m3 = sum(s * (s - 1) * (s - 2) // 6 * x for s, x in enumerate(c))
    return MomentVector(m1, m2, m3)


def red_moments(g: HalfEdgeGraph, tracker: VisitTracker, restriction: str | int = "all"):
    """Histogram of red degrees and its binomial moments.

    ``restriction`` is ``"all"`` or a tree-likeness depth: in the latter case
    only vertices whose ball of that radius is a tree are counted, and the
    number of skipped vertices is kept in ``excluded``.
    """
    top = int(g.degrees.max(initial=0))
    if restriction == "all":
        h = RedDegreeHistogram(tracker.red_histogram(top))
    else:
        mask = nice_mask(g, int(restriction))
        h = RedDegreeHistogram(tracker.red_histogram(top, mask), f"nice({int(restriction)})",
                               int(g.n - mask.sum()))
    return h, moments_from_histogram(h.counts)


def _counts(hist) -> np.ndarray:
    if isinstance(hist, RedDegreeHistogram):
        return np.asarray(hist.counts)
    if isinstance(hist, DegreeSequence):
        return hist.histogram()
    return np.asarray(hist)


def molloy_reed_L(hist) -> float:
    """sum_s s(s-2) D_s / sum_s D_s."""
    c = _counts(hist).astype(float)
    total = c.sum()
    if total <= 0:
        raise ValueError("empty histogram")
    s = np.arange(c.size)
    return float((s * (s - 2) * c).sum() / total)


def q_statistic(m: MomentVector) -> float:
    """2 M(2) - M(1), which equals sum_s s(s-2) D_s."""
    return float(2 * m.M2 - m.M1)


def q_error_budget(excluded: int, max_degree: int) -> float:
    """Size of the correction term r^2 |excluded| when moments skip vertices."""
    return float(max_degree**2 * excluded)


def r_statistic(m: MomentVector) -> float:
    """(6 M(3) - 2 M(2) + M(1)) / M(1) = sum d(d-2)^2 / sum d."""
    if m.M1 == 0:
        raise ValueError("M1 is zero")
    return float((6 * m.M3 - 2 * m.M2 + m.M1) / m.M1)


class Phase(enum.Enum):
    SUB_CRITICAL = "sub"
    SUPER_CRITICAL = "super"
    WINDOW = "window"


@dataclass(frozen=True)
class CriticalityConfig:
    super_frac: float = 0.005
    dominance_ratio: float = 10.0
    log_const: float = 60.0


@dataclass(frozen=True)
class Criticality:
    phase: Phase
    C1: int
    C2: int
    subgraph_size: int
    log_bound: float
    config: CriticalityConfig = field(default_factory=CriticalityConfig)


def classify(summary: ComponentSummary, subgraph_size: int, n: int,
             config: CriticalityConfig | None = None) -> Criticality:
    """SubCritical if C1 <= log_const ln n; SuperCritical if C1 is a
    ``super_frac`` share of the subgraph and ``dominance_ratio`` times C2."""
    cfg = config or CriticalityConfig()
    bound = cfg.log_const * math.log(max(n, 2))
    c1, c2 = summary.C1, summary.C2
    if c1 <= bound:
        phase = Phase.SUB_CRITICAL
    elif c1 >= cfg.super_frac * subgraph_size and (c2 == 0 or c1 / c2 >= cfg.dominance_ratio):
        phase = Phase.SUPER_CRITICAL
    else:
        phase = Phase.WINDOW
    return Criticality(phase, c1, c2, int(subgraph_size), bound, cfg)


COMPONENT_COLUMNS = ["t", "C1", "C2", "components", "subgraph_vertices", "subgraph_edges",
                     "L", "Q", "R_stat"]


@dataclass(frozen=True)
class ComponentRow:
    t: int
    C1: int
    C2: int
    components: int
    subgraph_vertices: int
    subgraph_edges: int
    L: float
    Q: float
    R_stat: float

    def as_list(self) -> list:
        return [getattr(self, c) for c in COMPONENT_COLUMNS]


def analyse(sub: Subgraph, t: int, hist=None) -> tuple[ComponentRow, ComponentSummary]:
    """Component and Molloy-Reed summary of a subgraph.

    ``hist`` overrides the degree histogram used for L/Q/R (the vacant net
    keeps degree-zero vertices of the whole graph).
    """
    summ = components(sub)
    counts = sub.degree_histogram() if hist is None else _counts(hist)
    mom = moments_from_histogram(counts)
    L = molloy_reed_L(counts) if counts.sum() > 0 else float("nan")
    R = r_statistic(mom) if mom.M1 > 0 else float("nan")
    row = ComponentRow(int(t), summ.C1, summ.C2, summ.component_count, sub.num_vertices,
                       sub.num_edges, L, q_statistic(mom), R)
    return row, summ


@dataclass(frozen=True)
class ScalingProbe:
    rows: list  # (n, offset, t, median C1)
    exponent: float


def scaling_window_probe(kind, r: int, n_list, seeds, t_offset_grid=(0.0,),
                         obj: str = "vacant_set", graph: str = "simple") -> ScalingProbe:
    """Median C1 at ``t = u n + offset n^(2/3)`` around the predicted threshold
    ``u`` and the slope of log C1 against log n at offset 0."""
    from . import theory
    from .graphgen import sample_regular_configuration, sample_simple_regular
    from .rng import GRAPH, WALK, make_rng
    from .walks import advance, init_walk

    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be ascending")
    offsets = sorted(float(x) for x in t_offset_grid)
    if 0.0 not in offsets:
        offsets = sorted(offsets + [0.0])
    u = theory.threshold(theory.WalkModel(kind, r), obj)
    sampler = sample_simple_regular if graph == "simple" else sample_regular_configuration
    rows = []
    for n in n_list:
        ts = [max(0, int(round(u * n + off * n ** (2 / 3)))) for off in offsets]
        c1 = np.zeros((len(seeds), len(ts)))
        for i, seed in enumerate(seeds):
            g = sampler(n, r, make_rng(seed, GRAPH))
            state, tracker = init_walk(g, kind, 0, make_rng(seed, WALK))
            for j, t in enumerate(ts):
                advance(state, tracker, g, t)
                sub = vacant_set_subgraph(g, tracker) if obj == "vacant_set" else \
                    vacant_net_subgraph(g, tracker)
                c1[i, j] = components(sub).C1
        for j, (off, t) in enumerate(zip(offsets, ts)):
            rows.append((n, off, t, float(np.median(c1[:, j]))))
    at0 = [(n, c) for n, off, _, c in rows if off == 0.0]
    x = np.log([n for n, _ in at0])
    y = np.log([max(c, 1.0) for _, c in at0])
    slope = float(np.polyfit(x, y, 1)[0]) if len(at0) > 1 else float("nan")
    return ScalingProbe(rows, slope)
