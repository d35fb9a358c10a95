"""Configuration-model graphs.

A graph is a perfect matching on labelled half-edges. Vertex ``v`` owns the
contiguous half-edge block ``offsets[v]:offsets[v+1]``; in the r-regular case
this is ``[v*r, (v+1)*r)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .rng import GRAPH, make_rng


class SamplingError(RuntimeError):
    """Rejection sampling gave up."""


class ConvergenceWarning(RuntimeWarning):
    pass


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DegreeSequence:
    degrees: np.ndarray
    max_degree: int | None = None

    def __post_init__(self):
        d = _frozen(np.asarray(self.degrees).ravel())
        object.__setattr__(self, "degrees", d)
        if d.size and d.min() < 0:
            raise ValueError("degrees must be non-negative")
        if int(d.sum()) % 2:
            raise ValueError("sum of degrees must be even")
        if self.max_degree is not None and d.size and d.max() > self.max_degree:
            raise ValueError(f"degree above the maximum {self.max_degree}")

    def __len__(self):
        return int(self.degrees.size)

    def histogram(self) -> np.ndarray:
        """Counts of vertices of degree 0..max."""
        top = int(self.degrees.max()) if self.degrees.size else 0
        return np.bincount(self.degrees, minlength=top + 1)


@dataclass(frozen=True, eq=False)
class HalfEdgeGraph:
    n: int
    offsets: np.ndarray
    pairing: np.ndarray
    retries: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "offsets", _frozen(self.offsets))
        object.__setattr__(self, "pairing", _frozen(self.pairing))
        if self.offsets.shape[0] != self.n + 1:
            raise ValueError("offsets must have n + 1 entries")
        if self.pairing.shape[0] != self.offsets[-1]:
            raise ValueError("pairing length must equal the number of half-edges")

    @cached_property
    def owner(self) -> np.ndarray:
        return _frozen(np.repeat(np.arange(self.n), np.diff(self.offsets)))

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.offsets))

    @property
    def num_half_edges(self) -> int:
        return int(self.pairing.shape[0])

    @property
    def m(self) -> int:
        return self.num_half_edges // 2

    @property
    def r(self) -> int | None:
        """Common degree if the graph is regular, else None."""
        if self.n == 0:
            return None
        d = self.degrees
        return int(d[0]) if (d == d[0]).all() else None

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Canonical edge keys (smaller half-edge of each pair), ascending."""
        h = np.arange(self.num_half_edges)
        return _frozen(h[h < self.pairing])

    @cached_property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` endpoints, row ``i`` belonging to ``edge_keys[i]``."""
        k = self.edge_keys
        out = np.stack([self.owner[k], self.owner[self.pairing[k]]], axis=1)
        out.setflags(write=False)
        return out

    def neighbor(self, h: int) -> int:
        return int(self.owner[self.pairing[h]])

    def adjacency(self, v: int) -> list[tuple[int, int]]:
        """(neighbour, half-edge) for every half-edge owned by ``v``."""
        lo, hi = self.offsets[v], self.offsets[v + 1]
        return [(int(self.owner[self.pairing[h]]), int(h)) for h in range(lo, hi)]

    def kernel_args(self):
        return self.offsets, self.owner, self.pairing


def _pair_uniformly(offsets: np.ndarray, rng: np.random.Generator, retries=0) -> HalfEdgeGraph:
    nh = int(offsets[-1])
    if nh % 2:
        raise ValueError("total degree must be even")
    perm = rng.permutation(nh)
    pairing = np.empty(nh, dtype=np.int64)
    pairing[perm[0::2]] = perm[1::2]
    pairing[perm[1::2]] = perm[0::2]
    return HalfEdgeGraph(len(offsets) - 1, offsets, pairing, retries)


def _regular_offsets(n: int, r: int) -> np.ndarray:
    return np.arange(n + 1, dtype=np.int64) * r


def _graph_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(seed, GRAPH)


def sample_regular_configuration(n: int, r: int, seed) -> HalfEdgeGraph:
    """Uniform random pairing of the ``n*r`` half-edges.

    ``seed`` is an integer or a ``numpy.random.Generator``.
    """
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if (n * r) % 2:
        raise ValueError(f"n*r must be even (got n={n}, r={r})")
    return _pair_uniformly(_regular_offsets(n, r), _graph_rng(seed))


def is_simple(g: HalfEdgeGraph) -> bool:
    """No loops and no parallel edges."""
    e = g.edges
    if e.shape[0] == 0:
        return True
    if (e[:, 0] == e[:, 1]).any():
        return False
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    code = lo * g.n + hi
    return np.unique(code).size == code.size


def sample_simple_regular(n: int, r: int, seed, max_retries: int = 10_000) -> HalfEdgeGraph:
    """Rejection-sample configurations until simple.

    The accepted pairing is uniform over simple r-regular graphs (each simple
    graph corresponds to the same number ``(r!)^n`` of pairings). The number of
    rejections is stored in ``retries``.
    """
    if (n * r) % 2:
        raise ValueError(f"n*r must be even (got n={n}, r={r})")
    if n <= r:
        raise ValueError(f"no simple {r}-regular graph on {n} vertices")
    rng = _graph_rng(seed)
    offsets = _regular_offsets(n, r)
    for attempt in range(max_retries + 1):
        g = _pair_uniformly(offsets, rng, retries=attempt)
        if is_simple(g):
            return g
    raise SamplingError(f"no simple graph after {max_retries} rejections (n={n}, r={r})")


def sample_with_degree_sequence(d: DegreeSequence | Sequence[int], seed) -> HalfEdgeGraph:
    """Uniform pairing of half-edges with per-vertex counts ``d``."""
    if not isinstance(d, DegreeSequence):
        d = DegreeSequence(np.asarray(d, dtype=np.int64))
    offsets = np.concatenate([[0], np.cumsum(d.degrees)]).astype(np.int64)
    return _pair_uniformly(offsets, _graph_rng(seed))


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> HalfEdgeGraph:
    """Build a graph from explicit edges; half-edges are numbered per vertex in
    edge order. Loops are given as ``(u, u)``."""
    edges = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise ValueError("edge endpoint out of range")
    deg = np.bincount(edges.ravel(), minlength=n)
    offsets = np.concatenate([[0], np.cumsum(deg)]).astype(np.int64)
    fill = offsets[:-1].copy()
    pairing = np.empty(int(offsets[-1]), dtype=np.int64)
    for u, v in edges:
        a = fill[u]
        fill[u] += 1
        b = fill[v]
        fill[v] += 1
        pairing[a] = b
        pairing[b] = a
    return HalfEdgeGraph(n, offsets, pairing)


def canonical_edges(g: HalfEdgeGraph) -> np.ndarray:
    """Edges as (min, max) rows sorted lexicographically; parallel edges repeat."""
    e = np.sort(g.edges, axis=1)
    order = np.lexsort((e[:, 1], e[:, 0]))
    return e[order]


def write_edge_list(g: HalfEdgeGraph, path) -> None:
    """Header ``n r`` (r = max degree), then one ``u v`` line per edge."""
    r = int(g.degrees.max()) if g.n else 0
    lines = [f"{g.n} {r}"]
    lines += [f"{u} {v}" for u, v in canonical_edges(g)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path) -> HalfEdgeGraph:
    rows = Path(path).read_text().split("\n")
    n, _r = (int(x) for x in rows[0].split())
    edges = [tuple(int(x) for x in line.split()) for line in rows[1:] if line.strip()]
    return from_edge_list(n, edges)


def nice_depth(n: int, r: int, eps1: float = 0.25) -> int:
    """Tree-likeness radius ``max(2, floor(eps1 * log_r n))``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return max(2, math.floor(eps1 * math.log(n) / math.log(r)))


def nice_mask(g: HalfEdgeGraph, depth: int) -> np.ndarray:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return _kernels.tree_like_mask(*g.kernel_args(), depth)


def nice_vertices(g: HalfEdgeGraph, depth: int) -> np.ndarray:
    """Vertices whose distance-``depth`` ball induces a tree."""
    return np.flatnonzero(nice_mask(g, depth))


def component_labels(g: HalfEdgeGraph) -> np.ndarray:
    e = g.edges
    return _kernels.union_find_labels(g.n, e[:, 0].copy(), e[:, 1].copy())


def is_connected(g: HalfEdgeGraph) -> bool:
    if g.n == 0:
        return True
    lab = component_labels(g)
    return bool((lab == lab[0]).all())


def largest_component_vertices(g: HalfEdgeGraph) -> np.ndarray:
    lab = component_labels(g)
    counts = np.bincount(lab, minlength=g.n)
    return np.flatnonzero(lab == counts.argmax())


def _walk_operator(g: HalfEdgeGraph):
    """Symmetrised transition operator D^-1/2 A D^-1/2 (multi-edges and loops
    counted with multiplicity) and its top eigenvector."""
    e = g.edges
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    a = sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(g.n, g.n))
    deg = g.degrees.astype(float)
    s = 1.0 / np.sqrt(deg)
    op = sp.diags(s) @ a @ sp.diags(s)
    top = np.sqrt(deg / deg.sum())
    return op.tocsr(), top


def estimate_lambda2(g: HalfEdgeGraph, iterations: int = 10_000, tolerance: float = 1e-8,
                     seed: int = 0) -> float:
    """Power-iteration estimate of max(|lambda_2|, |lambda_n|) of the walk.

    The stationary direction is projected out at every step. Warns with
    ``ConvergenceWarning`` if the estimate has not settled within the budget.
    """
    if g.n < 2 or (g.degrees == 0).any():
        raise ValueError("graph must have n >= 2 and no isolated vertices")
    op, top = _walk_operator(g)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(g.n)
    x -= top * (top @ x)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iterations):
        y = op @ x
        y -= top * (top @ y)
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0
        new = nrm
        x = y / nrm
        if abs(new - est) < tolerance:
            return float(new)
        est = new
    warnings.warn(f"lambda2 estimate not converged after {iterations} iterations",
                  ConvergenceWarning, stacklevel=2)
    return float(est)


@dataclass(frozen=True)
class GraphStats:
    n: int
    r: int | None
    simple: bool
    nice_count: int
    small_cycle_count: int
    lambda2_estimate: float | None = None


def graph_stats(g: HalfEdgeGraph, depth: int | None = None, eps1: float = 0.25,
                with_lambda2: bool = False) -> GraphStats:
    r = g.r
    if depth is None:
        depth = nice_depth(max(g.n, 2), max(r or int(g.degrees.max()), 2), eps1)
    nice = int(nice_mask(g, depth).sum())
    cycles = int(_kernels.count_short_cycles(*g.kernel_args(), 2 * depth + 1))
    lam = None
    if with_lambda2:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            lam = estimate_lambda2(g)
    return GraphStats(g.n, r, is_simple(g), nice, cycles, lam)
