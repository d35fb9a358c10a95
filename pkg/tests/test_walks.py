import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vacantlab.graphgen import (from_edge_list, nice_mask, sample_regular_configuration,
                                sample_simple_regular)
from vacantlab.walks import (WalkKind, advance, advance_red, check_edge_parity, cover_times,
                             extend_pairing_for_vacant_set, init_walk, run_to, snapshot_header,
                             step, trajectory, walk_generate)

KINDS = ["simple", "nbw", "edge"]


def cycle(n):
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def test_walk_kind_parse():
    assert WalkKind.parse("NBW") is WalkKind.NON_BACKTRACKING
    with pytest.raises(ValueError):
        WalkKind.parse("lazy")


@pytest.mark.parametrize("kind", KINDS)
def test_init(kind):
    g = sample_regular_configuration(100, 4, 0)
    state, tr = init_walk(g, kind, 5, 1)
    assert (state.t, tr.n_visited_vertices, tr.n_visited_edges) == (0, 1, 0)
    assert (tr.red_degree == g.degrees).all()
    assert tr.visited_vertices[5]


def test_init_errors_and_uniform_start():
    g = from_edge_list(3, [(0, 1)])
    with pytest.raises(ValueError):
        init_walk(g, "simple", 2)
    with pytest.raises(ValueError):
        init_walk(g, "simple", 7)
    h = sample_regular_configuration(1000, 3, 0)
    starts = {init_walk(h, "simple", "uniform", s)[0].current for s in range(20)}
    assert len(starts) > 10


@pytest.mark.parametrize("kind", KINDS)
def test_determinism_and_interruption_invariance(kind):
    g = sample_regular_configuration(2000, 4, 3)
    a, ta = init_walk(g, kind, 0, 9)
    advance(a, ta, g, 5000)
    b, tb = init_walk(g, kind, 0, 9)
    for t in (1, 2, 17, 1000, 4999):
        advance(b, tb, g, t)
    step(b, tb, g)
    assert (a.current, a.t_red, a.t_blue, a.phase_count) == (b.current, b.t_red, b.t_blue,
                                                             b.phase_count)
    assert np.array_equal(ta.visited_edges, tb.visited_edges)
    assert np.array_equal(ta.red_degree, tb.red_degree)


def test_simple_step_is_uniform_on_k4():
    g = from_edge_list(4, itertools.combinations(range(4), 2))
    counts = np.zeros(4)
    for s in range(6000):
        state, tr = init_walk(g, "simple", 0, s)
        counts[step(state, tr, g).target] += 1
    assert counts[0] == 0
    assert np.abs(counts[1:] / 6000 - 1 / 3).max() < 0.03


def test_nbw_on_cycle_is_a_rotation():
    n = 11
    g = cycle(n)
    for s in range(5):
        state, tr = init_walk(g, "nbw", 0, s)
        recs = trajectory(state, tr, g, 3 * n)
        d = (recs[0].target - recs[0].source) % n
        assert all((r.target - r.source) % n == d for r in recs)
        assert cover_times(g, "nbw", 0, s) == (n - 1, n)


def test_edge_process_on_four_cycle():
    g = cycle(4)
    for s in range(20):
        assert cover_times(g, "edge", 0, s) == (3, 4)
        state, tr = init_walk(g, "edge", 0, s)
        recs = trajectory(state, tr, g, 4)
        assert all(r.was_edge_new for r in recs)
        assert recs[-1].target == 0


@pytest.mark.parametrize("r", [4, 6])
def test_edge_process_parity_invariant(r):
    g = sample_regular_configuration(300, r, r)
    state, tr = init_walk(g, "edge", 0, 1)
    for _ in range(3000):
        step(state, tr, g)
        check_edge_parity(state, tr)
        assert state.t == state.t_red + state.t_blue
        assert tr.n_visited_edges == state.t_red


def test_edge_process_red_phases_close_at_their_start():
    g = sample_regular_configuration(500, 4, 2)
    state, tr = init_walk(g, "edge", 0, 4)
    phase_start = None
    for _ in range(4000):
        rec = step(state, tr, g)
        if rec.was_edge_new and phase_start is None:
            phase_start = rec.source
        if state.phase_start is None and phase_start is not None:
            # the phase just ended
            assert rec.target == phase_start and tr.red_degree[phase_start] == 0
            phase_start = None


def test_nbw_never_reverses():
    g = sample_simple_regular(500, 3, 1)
    state, tr = init_walk(g, "nbw", 0, 2)
    recs = trajectory(state, tr, g, 5000)
    assert all(a.edge != b.edge for a, b in zip(recs, recs[1:]))


@given(kind=st.sampled_from(KINDS), r=st.integers(3, 6), seed=st.integers(0, 10**6),
       t=st.integers(0, 3000))
@settings(max_examples=40, deadline=None)
def test_tracker_consistency(kind, r, seed, t):
    n = 200 if r % 2 == 0 else 100
    g = sample_regular_configuration(n, r, seed)
    state, tr = init_walk(g, kind, 0, seed)
    advance(state, tr, g, t)
    tr.check()
    keys = np.flatnonzero(tr.visited_edges)
    assert (keys < g.pairing[keys]).all()
    red = ~tr.visited_edges[g.edge_keys]
    per_vertex = np.bincount(g.edges[red].ravel(), minlength=n)
    assert (per_vertex == tr.red_degree).all()


def test_run_to_snapshots():
    g = cycle(8)
    state, tr = init_walk(g, "simple", 0, 1)
    snaps = run_to(state, tr, g, [0, 10, 100, 8 * 10 * 8 * 8])
    assert snaps[0].visited_vertices == 1 and snaps[0].visited_edges == 0
    assert all(a.visited_vertices <= b.visited_vertices and a.visited_edges <= b.visited_edges
               for a, b in zip(snaps, snaps[1:]))
    assert snaps[-1].visited_edges == 8
    assert snapshot_header(2) == ["t", "visited_vertices", "visited_edges", "d0", "d1", "d2"]
    assert snaps[1].csv_row()[:3] == [10, snaps[1].visited_vertices, snaps[1].visited_edges]
    with pytest.raises(ValueError):
        run_to(state, tr, g, [3, 2])


def test_red_clock():
    g = sample_regular_configuration(1000, 4, 0)
    state, tr = init_walk(g, "edge", 0, 0)
    advance_red(state, tr, g, 1500)
    assert state.t_red == 1500 and tr.n_visited_edges == 1500
    advance_red(state, tr, g, 10**9)
    assert tr.n_visited_edges == g.m


def test_total_to_red_ratio_before_the_end_of_the_red_walk():
    n, d = 100_000, 2
    g = sample_simple_regular(n, 2 * d, 0)
    state, tr = init_walk(g, "edge", 0, 0)
    advance_red(state, tr, g, int(d * n * 0.95))
    assert 1.0 <= state.t / state.t_red <= 1.1


def test_return_visits_to_a_nice_start():
    """Visits to the start in steps 0..49 average 1/(1 - 1/(r-1)) = 2 at r=3."""
    visits = []
    for gs in range(10):
        g = sample_simple_regular(100_000, 3, gs)
        nice = np.flatnonzero(nice_mask(g, 4))
        starts = np.random.default_rng(gs).choice(nice, 1000, replace=False)
        for i, v in enumerate(starts):
            state, tr = init_walk(g, "simple", int(v), gs * 10_000 + i)
            recs = trajectory(state, tr, g, 49)
            visits.append(1 + sum(r.target == v for r in recs))
    assert 1.9 <= np.mean(visits) <= 2.1


def test_trajectory_line_format():
    g = cycle(4)
    state, tr = init_walk(g, "edge", 0, 0)
    line = step(state, tr, g).line().split()
    assert len(line) == 5 and line[0] == "1" and line[-1] == "red"


def test_cover_times_budget():
    g = sample_regular_configuration(1000, 3, 0)
    assert cover_times(g, "simple", 0, 0, budget=10) == (None, None)
    with pytest.raises(ValueError):
        cover_times(g, "simple", 0, 0, budget=0)


# -- lazy generation -------------------------------------------------------

def test_walk_generate_basics():
    partial, state, tr = walk_generate(100, 3, "simple", 0, 0)
    assert partial.revealed_pairs().shape[0] == 0 and partial.nfree == 300
    for kind in KINDS:
        partial, state, tr = walk_generate(1000, 4, kind, 1, 700)
        pairs = partial.revealed_pairs()
        assert pairs.shape[0] <= 700
        assert np.array_equal(np.sort(pairs[:, 0]), np.flatnonzero(tr.visited_edges))
        assert partial.nfree == 4000 - 2 * pairs.shape[0]
        tr.check()
    with pytest.raises(ValueError):
        walk_generate(3, 3, "simple", 0, 1)


def test_extend_at_zero_gives_the_whole_graph():
    partial, state, tr = walk_generate(50, 3, "simple", 0, 0)
    # start is visited at t = 0, so it is the only missing vertex
    vac, ids = extend_pairing_for_vacant_set(partial, tr, 0)
    assert vac.n == 49 and 0 not in ids


def test_extend_after_cover_is_empty():
    partial, state, tr = walk_generate(30, 3, "simple", 0, 5000)
    assert tr.n_visited_vertices == 30
    vac, ids = extend_pairing_for_vacant_set(partial, tr, 0)
    assert vac.n == 0 and ids.size == 0


@given(seed=st.integers(0, 10**6), t=st.integers(0, 400), kind=st.sampled_from(KINDS))
@settings(max_examples=40, deadline=None)
def test_extend_degrees(seed, t, kind):
    n, r = 200, 4
    partial, state, tr = walk_generate(n, r, kind, seed, t)
    vac, ids = extend_pairing_for_vacant_set(partial, tr, seed)
    assert vac.degrees.sum() % 2 == 0
    assert (vac.pairing[vac.pairing] == np.arange(vac.num_half_edges)).all()
    # a vacant vertex keeps at most its unrevealed half-edges
    owner = partial.owner
    free = np.bincount(owner[partial.unpaired()], minlength=n)
    assert (vac.degrees <= free[ids]).all()
    assert (free[ids] == r).all()
