import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vacantlab.graphgen import DegreeSequence, from_edge_list, sample_regular_configuration
from vacantlab.structure import (COMPONENT_COLUMNS, ComponentSummary, MomentVector, Phase,
                                 Subgraph, analyse, classify, components, induced_subgraph,
                                 moments_from_histogram, molloy_reed_L, q_error_budget,
                                 q_statistic, r_statistic, red_moments, scaling_window_probe,
                                 vacant_net_subgraph, vacant_set_subgraph)
from vacantlab.validation import bfs_component_sizes, union_find_matches_bfs
from vacantlab.walks import advance, init_walk


def sub(nv, edges):
    return Subgraph(np.arange(nv), np.array(edges, dtype=np.int64).reshape(-1, 2), nv)


def test_vacant_set_examples():
    g = sample_regular_configuration(100, 3, 0)
    state, tr = init_walk(g, "simple", 0, 0)
    assert vacant_set_subgraph(g, tr).num_vertices == 99
    advance(state, tr, g, 10**6)
    assert vacant_set_subgraph(g, tr).num_vertices == 0
    path = from_edge_list(3, [(0, 1), (1, 2)])
    _, tr = init_walk(path, "simple", 1, 0)
    s = vacant_set_subgraph(path, tr)
    assert list(s.vertices) == [0, 2] and s.num_edges == 0


def test_vacant_net_examples():
    g = sample_regular_configuration(100, 3, 0)
    state, tr = init_walk(g, "simple", 0, 0)
    s = vacant_net_subgraph(g, tr)
    assert s.num_edges == g.m
    advance(state, tr, g, 10**6)
    assert vacant_net_subgraph(g, tr).num_edges == 0
    tri = from_edge_list(3, [(0, 1), (1, 2), (2, 0)])
    state, tr = init_walk(tri, "simple", 0, 0)
    while tr.n_visited_edges == 0:
        advance(state, tr, tri, state.t + 1)
    s = vacant_net_subgraph(tri, tr)
    assert s.num_edges == 2 and s.num_vertices == 3
    assert components(s).C1 == 3


def test_components_examples():
    e = components(sub(0, []))
    assert (e.C1, e.C2, e.component_count) == (0, 0, 0)
    two = components(sub(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]))
    assert list(two.sizes) == [3, 3] and two.component_count == 2


def test_union_find_matches_bfs_exhaustively():
    checked, bad = union_find_matches_bfs(6)
    assert checked == sum(2 ** (v * (v - 1) // 2) for v in range(1, 7)) and bad == 0


@given(nv=st.integers(1, 1000), m=st.integers(0, 1500), seed=st.integers(0, 10**6))
@settings(max_examples=50, deadline=None)
def test_union_find_matches_bfs_random(nv, m, seed):
    rng = np.random.default_rng(seed)
    edges = rng.integers(0, nv, size=(m, 2))
    s = components(sub(nv, edges))
    assert list(s.sizes) == bfs_component_sizes(nv, edges.tolist())
    assert s.sizes.sum() == nv


def test_red_moments_examples():
    n = 500
    g = sample_regular_configuration(n, 3, 1)
    state, tr = init_walk(g, "simple", 0, 0)
    h, m = red_moments(g, tr)
    assert (m.M1, m.M2, m.M3) == (3 * n, 3 * n, n)
    assert h.total == n
    advance(state, tr, g, 10**6)
    assert red_moments(g, tr)[1] == MomentVector(0, 0, 0)
    assert moments_from_histogram([0, 0, 1, 0]) == MomentVector(2, 1, 0)


def test_red_moments_nice_restriction():
    g = sample_regular_configuration(2000, 3, 1)
    state, tr = init_walk(g, "simple", 0, 0)
    advance(state, tr, g, 2000)
    h, m = red_moments(g, tr, 2)
    assert h.restriction == "nice(2)"
    assert h.total + h.excluded == g.n
    full, mf = red_moments(g, tr)
    assert abs(q_statistic(mf) - q_statistic(m)) <= q_error_budget(h.excluded, 3)


@given(counts=st.lists(st.integers(0, 50), min_size=1, max_size=8))
def test_moment_identities(counts):
    m = moments_from_histogram(counts)
    s = np.arange(len(counts))
    c = np.array(counts)
    assert m.M1 == int((s * c).sum())
    assert m.M2 == sum(math.comb(int(k), 2) * x for k, x in zip(s, counts))
    assert m.M3 == sum(math.comb(int(k), 3) * x for k, x in zip(s, counts))
    assert q_statistic(m) == int((s * (s - 2) * c).sum())
    if c.sum() > 0:
        L = molloy_reed_L(counts)
        if L != 0 and q_statistic(m) != 0:
            assert np.sign(L) == np.sign(q_statistic(m))
    if m.M1 > 0:
        assert r_statistic(m) == pytest.approx((s * (s - 2) ** 2 * c).sum() / (s * c).sum())


@given(seed=st.integers(0, 10**6), t=st.integers(0, 2000))
@settings(max_examples=25, deadline=None)
def test_histogram_invariants_along_a_walk(seed, t):
    g = sample_regular_configuration(300, 3, seed)
    state, tr = init_walk(g, "nbw", 0, seed)
    advance(state, tr, g, t)
    h, m = red_moments(g, tr)
    assert h.total == g.n
    assert m.M1 == 2 * (g.m - tr.n_visited_edges)


def test_molloy_reed_examples():
    assert molloy_reed_L([0, 0, 0, 7]) == 3
    assert molloy_reed_L([0, 5]) == -1
    assert molloy_reed_L([0, 4, 0, 4]) == 1
    assert molloy_reed_L(DegreeSequence([3, 3, 1, 1])) == 1
    with pytest.raises(ValueError):
        molloy_reed_L([0, 0])


def test_q_and_r_examples():
    n = 1000
    assert q_statistic(moments_from_histogram([0, 0, 0, n])) == 3 * n
    assert q_statistic(MomentVector(0, 0, 0)) == 0
    assert r_statistic(moments_from_histogram([0, 0, 0, 10])) == 1
    assert r_statistic(moments_from_histogram([0, 10])) == 1
    assert r_statistic(moments_from_histogram([0, 0, 10])) == 0
    with pytest.raises(ValueError):
        r_statistic(MomentVector(0, 0, 0))


def test_classify_examples():
    n = 10**5
    assert classify(ComponentSummary(np.zeros(0), 0, 0, 0), 0, n).phase is Phase.SUB_CRITICAL
    assert classify(ComponentSummary(np.array([n]), n, 0, 1), n, n).phase is Phase.SUPER_CRITICAL
    c = round(n ** (2 / 3))
    w = classify(ComponentSummary(np.array([c, c]), c, c, 2), n // 2, n)
    assert w.phase is Phase.WINDOW and w.log_bound == pytest.approx(60 * math.log(n))


def test_analyse_row_schema():
    row, summ = analyse(sub(4, [(0, 1), (1, 2)]), 7)
    assert COMPONENT_COLUMNS == ["t", "C1", "C2", "components", "subgraph_vertices",
                                 "subgraph_edges", "L", "Q", "R_stat"]
    assert row.as_list()[:6] == [7, 3, 1, 2, 4, 2]
    assert row.Q == 2 * 1 - 4


def test_induced_subgraph():
    g = from_edge_list(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    s = induced_subgraph(g, np.array([True, True, True, False]))
    assert s.num_vertices == 3 and s.num_edges == 2
    assert list(s.degree_histogram()) == [0, 2, 1]


def test_scaling_probe_limits():
    low = scaling_window_probe("simple", 3, [2000, 4000, 8000], [0, 1], t_offset_grid=(-3.0,))
    assert len(low.rows) == 6
    with pytest.raises(ValueError):
        scaling_window_probe("simple", 3, [4000, 2000], [0])
