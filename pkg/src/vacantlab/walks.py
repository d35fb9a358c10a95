"""Simple, non-backtracking and unvisited-edge-preferring walks.

The per-step work happens in compiled kernels; the objects here hold the
state between calls. A step is *red* when it crosses a previously unvisited
edge and *blue* otherwise, for every walk kind.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .graphgen import HalfEdgeGraph
from .rng import EXTEND, GRAPH, START, WALK, UniformStream, make_rng


class WalkKind(enum.Enum):
    SIMPLE = "simple"
    NON_BACKTRACKING = "nbw"
    EDGE_PROCESS = "edge"

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def parse(cls, value) -> "WalkKind":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


_CODES = {WalkKind.SIMPLE: K.SIMPLE, WalkKind.NON_BACKTRACKING: K.NBW,
          WalkKind.EDGE_PROCESS: K.EDGE}


@dataclass
class WalkState:
    """Position and counters of one walk. ``prev_half_edge`` is the half-edge
    of ``current`` through which the walk arrived (``None`` before the first
    step); ``phase_start`` is the start vertex of the red phase in progress."""

    kind: WalkKind
    current: int
    prev_half_edge: int | None
    t: int
    t_red: int
    t_blue: int
    phase_start: int | None
    phase_count: int
    stream: UniformStream = field(repr=False)

    def _pack(self, tracker: "VisitTracker") -> np.ndarray:
        st = np.empty(K.STATE_LEN, dtype=np.int64)
        st[K.S_CUR] = self.current
        st[K.S_ARRIVAL] = -1 if self.prev_half_edge is None else self.prev_half_edge
        st[K.S_T] = self.t
        st[K.S_TRED] = self.t_red
        st[K.S_TBLUE] = self.t_blue
        st[K.S_PHASE_START] = -1 if self.phase_start is None else self.phase_start
        st[K.S_PHASE_COUNT] = self.phase_count
        st[K.S_NVIS] = tracker.n_visited_vertices
        st[K.S_NEDGE] = tracker.n_visited_edges
        st[K.S_VCOVER] = -1 if tracker.vertex_cover_time is None else tracker.vertex_cover_time
        st[K.S_ECOVER] = -1 if tracker.edge_cover_time is None else tracker.edge_cover_time
        return st

    def _unpack(self, st: np.ndarray, tracker: "VisitTracker") -> None:
        self.current = int(st[K.S_CUR])
        a = int(st[K.S_ARRIVAL])
        self.prev_half_edge = None if a < 0 else a
        self.t = int(st[K.S_T])
        self.t_red = int(st[K.S_TRED])
        self.t_blue = int(st[K.S_TBLUE])
        ps = int(st[K.S_PHASE_START])
        self.phase_start = None if ps < 0 else ps
        self.phase_count = int(st[K.S_PHASE_COUNT])
        tracker.n_visited_vertices = int(st[K.S_NVIS])
        tracker.n_visited_edges = int(st[K.S_NEDGE])
        vc, ec = int(st[K.S_VCOVER]), int(st[K.S_ECOVER])
        tracker.vertex_cover_time = None if vc < 0 else vc
        tracker.edge_cover_time = None if ec < 0 else ec


@dataclass
class VisitTracker:
    """Visited vertices |B(t)|, visited edges |S(t)| and red degrees.

    ``visited_edges`` is indexed by canonical edge key (the smaller half-edge
    of the pair), so it has one slot per half-edge.
    """

    visited_vertices: np.ndarray
    visited_edges: np.ndarray
    red_degree: np.ndarray
    n_visited_vertices: int
    n_visited_edges: int
    n_edges: int
    vertex_cover_time: int | None = None
    edge_cover_time: int | None = None

    @property
    def n(self) -> int:
        return int(self.visited_vertices.shape[0])

    def red_histogram(self, max_degree: int | None = None, mask=None) -> np.ndarray:
        d = self.red_degree if mask is None else self.red_degree[mask]
        top = int(self.red_degree.max(initial=0)) if max_degree is None else max_degree
        return np.bincount(d, minlength=top + 1)

    def check(self) -> None:
        """Recount from the bit-sets; raises AssertionError on mismatch."""
        assert int(self.visited_vertices.sum()) == self.n_visited_vertices
        assert int(self.visited_edges.sum()) == self.n_visited_edges
        assert int(self.red_degree.sum()) == 2 * (self.n_edges - self.n_visited_edges)

    def copy(self) -> "VisitTracker":
        return VisitTracker(self.visited_vertices.copy(), self.visited_edges.copy(),
                            self.red_degree.copy(), self.n_visited_vertices,
                            self.n_visited_edges, self.n_edges,
                            self.vertex_cover_time, self.edge_cover_time)


@dataclass(frozen=True)
class TransitionRecord:
    t: int
    source: int
    target: int
    edge: int
    was_edge_new: bool
    was_vertex_new: bool

    @property
    def color(self) -> str:
        return "red" if self.was_edge_new else "blue"

    def line(self) -> str:
        return f"{self.t} {self.source} {self.target} {self.edge} {self.color}"


@dataclass(frozen=True)
class Snapshot:
    t: int
    visited_vertices: int
    visited_edges: int
    red_histogram: np.ndarray

    def csv_row(self) -> list[int]:
        return [self.t, self.visited_vertices, self.visited_edges, *map(int, self.red_histogram)]


def snapshot_header(max_degree: int) -> list[str]:
    return ["t", "visited_vertices", "visited_edges"] + [f"d{s}" for s in range(max_degree + 1)]


def _walk_stream(seed) -> UniformStream:
    if isinstance(seed, UniformStream):
        return seed
    if isinstance(seed, np.random.Generator):
        return UniformStream(seed)
    return UniformStream(make_rng(seed, WALK))


def _fresh_tracker(n: int, num_half_edges: int, degrees: np.ndarray, start: int) -> VisitTracker:
    vis = np.zeros(n, dtype=np.bool_)
    vis[start] = True
    tr = VisitTracker(vis, np.zeros(num_half_edges, dtype=np.bool_),
                      np.array(degrees, dtype=np.int64), 1, 0, num_half_edges // 2)
    if n == 1:
        tr.vertex_cover_time = 0
    if tr.n_edges == 0:
        tr.edge_cover_time = 0
    return tr


def _resolve_start(n: int, degrees: np.ndarray, start, seed) -> int:
    if start == "uniform" or start is None:
        rng = make_rng(seed, START) if not isinstance(seed, np.random.Generator) else seed
        start = int(rng.integers(n))
    start = int(start)
    if not 0 <= start < n:
        raise ValueError(f"start vertex {start} out of range")
    if degrees[start] == 0:
        raise ValueError(f"start vertex {start} is isolated")
    return start


def init_walk(g: HalfEdgeGraph, kind, start=0, seed=0) -> tuple[WalkState, VisitTracker]:
    """Fresh walk at ``start`` (a vertex or ``"uniform"``)."""
    kind = WalkKind.parse(kind)
    if g.n == 0:
        raise ValueError("empty graph")
    start = _resolve_start(g.n, g.degrees, start, seed)
    tracker = _fresh_tracker(g.n, g.num_half_edges, g.degrees, start)
    state = WalkState(kind, start, None, 0, 0, 0, None, 0, _walk_stream(seed))
    return state, tracker


def _advance(state: WalkState, tracker: VisitTracker, g: HalfEdgeGraph, target: int,
             clock: int = 0, stop_on_cover: bool = False) -> np.ndarray:
    st = state._pack(tracker)
    rec = np.full(K.REC_LEN, -1, dtype=np.int64)
    stream = state.stream
    while True:
        done = st[K.S_T] >= target if clock == 0 else (
            st[K.S_TRED] >= target or st[K.S_NEDGE] == tracker.n_edges)
        if stop_on_cover:
            done = done or (st[K.S_VCOVER] >= 0 and st[K.S_ECOVER] >= 0)
        if done:
            break
        stream.ensure(1)
        stream.pos = K.advance_walk(state.kind.code, g.offsets, g.owner, g.pairing,
                                    tracker.visited_vertices, tracker.visited_edges,
                                    tracker.red_degree, st, stream.buf, stream.pos,
                                    target, clock, stop_on_cover, tracker.n_edges, rec)
    state._unpack(st, tracker)
    return rec


def advance(state: WalkState, tracker: VisitTracker, g: HalfEdgeGraph, t: int) -> None:
    """Run until total step ``t``."""
    if t < state.t:
        raise ValueError(f"cannot move back from step {state.t} to {t}")
    _advance(state, tracker, g, t)


def advance_red(state: WalkState, tracker: VisitTracker, g: HalfEdgeGraph, t_red: int) -> None:
    """Run until ``t_red`` red steps have been made (or every edge is visited)."""
    if t_red < state.t_red:
        raise ValueError(f"cannot move back from red step {state.t_red} to {t_red}")
    _advance(state, tracker, g, t_red, clock=1)


def step(state: WalkState, tracker: VisitTracker, g: HalfEdgeGraph) -> TransitionRecord:
    """One transition of the walk."""
    rec = _advance(state, tracker, g, state.t + 1)
    return TransitionRecord(state.t, int(rec[0]), int(rec[1]), int(rec[2]),
                            bool(rec[3]), bool(rec[4]))


def check_edge_parity(state: WalkState, tracker: VisitTracker) -> None:
    """Inside a red phase every vertex other than the phase start and the
    current vertex has even red degree (even-degree graphs only)."""
    odd = np.flatnonzero(tracker.red_degree % 2)
    allowed = {state.current}
    if state.phase_start is not None:
        allowed.add(state.phase_start)
    bad = [int(v) for v in odd if int(v) not in allowed]
    if bad:
        raise AssertionError(f"odd red degree at step {state.t} on vertices {bad[:5]}")


def trajectory(state: WalkState, tracker: VisitTracker, g: HalfEdgeGraph, steps: int,
               debug: bool = False) -> list[TransitionRecord]:
    """Step one at a time, optionally asserting the parity invariant."""
    out = []
    for _ in range(steps):
        out.append(step(state, tracker, g))
        if debug and state.kind is WalkKind.EDGE_PROCESS:
            check_edge_parity(state, tracker)
    return out


def snapshot(state: WalkState, tracker: VisitTracker, max_degree: int) -> Snapshot:
    return Snapshot(state.t, tracker.n_visited_vertices, tracker.n_visited_edges,
                    tracker.red_histogram(max_degree))


def run_to(state: WalkState, tracker: VisitTracker, g: HalfEdgeGraph,
           checkpoints) -> list[Snapshot]:
    """Advance through ascending ``checkpoints``, snapshotting at each."""
    cps = [int(c) for c in checkpoints]
    if any(b < a for a, b in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be sorted ascending")
    top = int(g.degrees.max(initial=0))
    out = []
    for c in cps:
        advance(state, tracker, g, c)
        out.append(snapshot(state, tracker, top))
    return out


def cover_times(g: HalfEdgeGraph, kind, start=0, seed=0, budget: int = 10**9):
    """(vertex cover time, edge cover time); ``None`` where the budget ran out."""
    if budget < 1:
        raise ValueError("budget must be positive")
    state, tracker = init_walk(g, kind, start, seed)
    _advance(state, tracker, g, budget, stop_on_cover=True)
    return tracker.vertex_cover_time, tracker.edge_cover_time


# -- walk-driven generation of the configuration ---------------------------

@dataclass
class PartialConfiguration:
    """Half-edges of an ``n``-vertex degree sequence, some of them paired.

    ``pairing[h] == -1`` marks an unrevealed half-edge; ``free[:nfree]`` lists
    them and ``fpos`` is the inverse index.
    """

    n: int
    offsets: np.ndarray
    pairing: np.ndarray
    free: np.ndarray
    fpos: np.ndarray
    nfree: int

    @property
    def owner(self) -> np.ndarray:
        return np.repeat(np.arange(self.n), np.diff(self.offsets))

    def revealed_pairs(self) -> np.ndarray:
        h = np.arange(self.pairing.shape[0])
        keep = (self.pairing >= 0) & (h < self.pairing)
        return np.stack([h[keep], self.pairing[keep]], axis=1)

    def unpaired(self) -> np.ndarray:
        return np.sort(self.free[:self.nfree])

    def copy(self) -> "PartialConfiguration":
        return PartialConfiguration(self.n, self.offsets, self.pairing.copy(),
                                    self.free.copy(), self.fpos.copy(), self.nfree)


def walk_generate(n: int, r: int, kind, seed, t_stop: int, start=0):
    """Run the walk while revealing the r-regular configuration lazily.

    Returns ``(partial, state, tracker)``; revealed pairs are exactly the
    visited edges.
    """
    kind = WalkKind.parse(kind)
    if (n * r) % 2:
        raise ValueError(f"n*r must be even (got n={n}, r={r})")
    offsets = np.arange(n + 1, dtype=np.int64) * r
    nh = n * r
    partial = PartialConfiguration(n, offsets, np.full(nh, -1, dtype=np.int64),
                                   np.arange(nh, dtype=np.int64),
                                   np.arange(nh, dtype=np.int64), nh)
    degrees = np.full(n, r, dtype=np.int64)
    start = _resolve_start(n, degrees, start, seed)
    tracker = _fresh_tracker(n, nh, degrees, start)
    state = WalkState(kind, start, None, 0, 0, 0, None, 0, _walk_stream(seed))
    owner = partial.owner
    st = state._pack(tracker)
    rec = np.full(K.REC_LEN, -1, dtype=np.int64)
    box = np.array([partial.nfree], dtype=np.int64)
    stream = state.stream
    while st[K.S_T] < t_stop:
        stream.ensure(2)
        stream.pos = K.advance_lazy(kind.code, offsets, owner, partial.pairing, partial.free,
                                    partial.fpos, box, tracker.visited_vertices,
                                    tracker.visited_edges, tracker.red_degree, st,
                                    stream.buf, stream.pos, t_stop, tracker.n_edges, rec)
    partial.nfree = int(box[0])
    state._unpack(st, tracker)
    return partial, state, tracker


def extend_pairing_for_vacant_set(partial: PartialConfiguration, tracker: VisitTracker, seed):
    """Complete the pairing so that the vacant set's induced multigraph is
    exposed as a uniform pairing of its own remaining half-edges.

    Unpaired half-edges of visited vertices are matched first to uniform
    unpaired partners; what is left belongs to unvisited vertices and is
    paired uniformly. Returns ``(vacant_graph, vacant_vertices)`` where vertex
    ``i`` of ``vacant_graph`` is ``vacant_vertices[i]`` of the original graph.
    """
    p = partial.copy()
    owner = p.owner
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed, EXTEND)
    u = rng.random(2 * p.nfree + 1)
    free_before = p.free[:p.nfree].copy()
    K.extend_visited(owner, p.pairing, p.free, p.fpos, p.nfree, tracker.visited_vertices, u)
    vacant = np.flatnonzero(~tracker.visited_vertices)
    # half-edges of vacant vertices paired among themselves
    h = free_before[~tracker.visited_vertices[owner[free_before]]]
    inside = h[~tracker.visited_vertices[owner[p.pairing[h]]]]
    inside = np.sort(inside)
    local = np.full(p.n, -1, dtype=np.int64)
    local[vacant] = np.arange(vacant.size)
    deg = np.bincount(local[owner[inside]], minlength=vacant.size) if vacant.size else \
        np.zeros(0, dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(deg)]).astype(np.int64)
    # new half-edge index of each old one: position within its vertex block
    new_index = np.full(p.pairing.shape[0], -1, dtype=np.int64)
    new_index[inside] = np.arange(inside.size)
    pairing = new_index[p.pairing[inside]]
    return HalfEdgeGraph(int(vacant.size), offsets, pairing), vacant


def pregenerated_visits(n: int, r: int, kind, seed, t: int, start=0) -> int:
    """|B(t)| for a walk on a fully pre-generated configuration (the
    comparison mode for ``walk_generate``)."""
    from .graphgen import sample_regular_configuration
    g = sample_regular_configuration(n, r, make_rng(seed, GRAPH))
    state, tracker = init_walk(g, kind, start, seed)
    advance(state, tracker, g, t)
    return tracker.n_visited_vertices
