"""Compiled inner loops (numba).

Graphs are passed as three int64 arrays: ``offsets`` (CSR over half-edges),
``owner`` (half-edge -> vertex) and ``pairing`` (the involution, ``-1`` for an
unrevealed half-edge). The canonical key of an undirected edge is the smaller
of its two half-edge indices.

Walk state is a flat int64 vector indexed by the ``S_*`` constants below.
"""

import numpy as np
from numba import njit

SIMPLE = 0
NBW = 1
EDGE = 2

S_CUR = 0
S_ARRIVAL = 1
S_T = 2
S_TRED = 3
S_TBLUE = 4
S_PHASE_START = 5
S_PHASE_COUNT = 6
S_NVIS = 7
S_NEDGE = 8
S_VCOVER = 9
S_ECOVER = 10
STATE_LEN = 11

# transition record: from, to, edge key, edge_new, vertex_new
REC_LEN = 5


@njit(cache=True, nogil=True)
def _choose_half_edge(kind, v, offsets, pairing, visited_e, red_deg, arrival, x, lazy):
    lo = offsets[v]
    deg = offsets[v + 1] - lo
    if kind == NBW and arrival >= 0 and deg > 1:
        h = lo + int(x * (deg - 1))
        if h >= arrival:
            h += 1
        return h
    if kind == NBW and arrival >= 0:
        return arrival
    if kind == EDGE and red_deg[v] > 0:
        k = int(x * red_deg[v])
        for j in range(lo, lo + deg):
            p = pairing[j]
            if lazy:
                red = p < 0
            else:
                red = not visited_e[j if j < p else p]
            if red:
                if k == 0:
                    return j
                k -= 1
    return lo + int(x * deg)


@njit(cache=True, nogil=True)
def _record_move(v, h, p, owner, visited_v, visited_e, red_deg, st, n, n_edges, rec):
    w = owner[p]
    key = h if h < p else p
    new_e = not visited_e[key]
    st[S_T] += 1
    if new_e:
        visited_e[key] = True
        st[S_NEDGE] += 1
        red_deg[v] -= 1
        red_deg[w] -= 1
        st[S_TRED] += 1
        if st[S_PHASE_START] < 0:
            st[S_PHASE_START] = v
            st[S_PHASE_COUNT] += 1
        if red_deg[w] == 0:
            st[S_PHASE_START] = -1
    else:
        st[S_TBLUE] += 1
        st[S_PHASE_START] = -1
    new_v = not visited_v[w]
    if new_v:
        visited_v[w] = True
        st[S_NVIS] += 1
    if st[S_NVIS] == n and st[S_VCOVER] < 0:
        st[S_VCOVER] = st[S_T]
    if st[S_NEDGE] == n_edges and st[S_ECOVER] < 0:
        st[S_ECOVER] = st[S_T]
    st[S_CUR] = w
    st[S_ARRIVAL] = p
    rec[0] = v
    rec[1] = w
    rec[2] = key
    rec[3] = 1 if new_e else 0
    rec[4] = 1 if new_v else 0


@njit(cache=True, nogil=True)
def advance_walk(kind, offsets, owner, pairing, visited_v, visited_e, red_deg,
                 st, u, upos, target, clock, stop_on_cover, n_edges, rec):
    """Advance a walk on a fully paired graph.

    Stops when the chosen clock (0 total, 1 red) reaches ``target``, when both
    cover events happened (if ``stop_on_cover``) or when ``u`` is exhausted.
    Returns the new read position in ``u``.
    """
    n = offsets.shape[0] - 1
    m = u.shape[0]
    while True:
        if clock == 0:
            if st[S_T] >= target:
                break
        elif st[S_TRED] >= target or st[S_NEDGE] == n_edges:
            break
        if stop_on_cover and st[S_VCOVER] >= 0 and st[S_ECOVER] >= 0:
            break
        if upos >= m:
            break
        x = u[upos]
        upos += 1
        v = st[S_CUR]
        h = _choose_half_edge(kind, v, offsets, pairing, visited_e, red_deg,
                              st[S_ARRIVAL], x, False)
        _record_move(v, h, pairing[h], owner, visited_v, visited_e, red_deg,
                     st, n, n_edges, rec)
    return upos


@njit(cache=True, nogil=True)
def _remove_free(h, free, fpos, nfree):
    i = fpos[h]
    last = free[nfree - 1]
    free[i] = last
    fpos[last] = i
    fpos[h] = -1
    return nfree - 1


@njit(cache=True, nogil=True)
def advance_lazy(kind, offsets, owner, pairing, free, fpos, nfree_box,
                 visited_v, visited_e, red_deg, st, u, upos, target, n_edges, rec):
    """Walk that reveals the configuration as it goes (deferred decisions).

    A chosen half-edge that is still unpaired is matched to a uniform unpaired
    half-edge other than itself. ``nfree_box[0]`` holds the number of
    unpaired half-edges listed in ``free``.
    """
    n = offsets.shape[0] - 1
    m = u.shape[0]
    nfree = nfree_box[0]
    while st[S_T] < target:
        if upos + 2 > m:
            break
        v = st[S_CUR]
        h = _choose_half_edge(kind, v, offsets, pairing, visited_e, red_deg,
                              st[S_ARRIVAL], u[upos], True)
        upos += 1
        if pairing[h] < 0:
            j = int(u[upos] * (nfree - 1))
            upos += 1
            if j >= fpos[h]:
                j += 1
            y = free[j]
            nfree = _remove_free(h, free, fpos, nfree)
            nfree = _remove_free(y, free, fpos, nfree)
            pairing[h] = y
            pairing[y] = h
        _record_move(v, h, pairing[h], owner, visited_v, visited_e, red_deg,
                     st, n, n_edges, rec)
    nfree_box[0] = nfree
    return upos


@njit(cache=True, nogil=True)
def extend_visited(owner, pairing, free, fpos, nfree, visited_v, u):
    """Pair every unpaired half-edge of a visited vertex with a uniform
    unpaired partner, then pair the remaining half-edges uniformly.

    Returns the number of half-edges that were still unpaired after the
    first phase (these all belong to unvisited vertices).
    """
    upos = 0
    stack = np.empty(nfree, np.int64)
    ns = 0
    for i in range(nfree):
        h = free[i]
        if visited_v[owner[h]]:
            stack[ns] = h
            ns += 1
    while ns > 0:
        ns -= 1
        x = stack[ns]
        if fpos[x] < 0:
            continue
        j = int(u[upos] * (nfree - 1))
        upos += 1
        if j >= fpos[x]:
            j += 1
        y = free[j]
        nfree = _remove_free(x, free, fpos, nfree)
        nfree = _remove_free(y, free, fpos, nfree)
        pairing[x] = y
        pairing[y] = x
    rest = nfree
    # Fisher-Yates on what is left, then pair neighbours
    for i in range(nfree - 1, 0, -1):
        j = int(u[upos] * (i + 1))
        upos += 1
        tmp = free[i]
        free[i] = free[j]
        free[j] = tmp
    for i in range(0, nfree, 2):
        a = free[i]
        b = free[i + 1]
        pairing[a] = b
        pairing[b] = a
        fpos[a] = -1
        fpos[b] = -1
    return rest


@njit(cache=True, nogil=True)
def pairs_process(n, d, t, u):
    """Pairs-process on ``n`` vertices with ``2d`` points each, run for ``t``
    steps. Returns the number of unused points per vertex."""
    npts = 2 * d * n
    glob = np.arange(npts)
    gpos = np.arange(npts)
    cnt = np.full(n, 2 * d, np.int64)
    ng = npts
    upos = 0
    for _ in range(t):
        i = int(u[upos] * ng)
        upos += 1
        a = glob[i]
        v = a // (2 * d)
        ng = _remove_free(a, glob, gpos, ng)
        k = int(u[upos] * (cnt[v] - 1))
        upos += 1
        base = v * 2 * d
        for j in range(base, base + 2 * d):
            if gpos[j] >= 0:
                if k == 0:
                    ng = _remove_free(j, glob, gpos, ng)
                    break
                k -= 1
        cnt[v] -= 2
    return cnt


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def union_find_labels(nv, eu, ev):
    """Component root of every vertex, union by size with path compression."""
    parent = np.arange(nv)
    size = np.ones(nv, np.int64)
    for i in range(eu.shape[0]):
        a = _find(parent, eu[i])
        b = _find(parent, ev[i])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
    for x in range(nv):
        parent[x] = _find(parent, x)
    return parent


@njit(cache=True, nogil=True)
def tree_like_mask(offsets, owner, pairing, depth):
    """True for vertices whose distance-``depth`` ball induces a tree."""
    n = offsets.shape[0] - 1
    out = np.zeros(n, np.bool_)
    stamp = np.full(n, -1, np.int64)
    dist = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    for s in range(n):
        head = 0
        tail = 1
        queue[0] = s
        stamp[s] = s
        dist[s] = 0
        while head < tail:
            v = queue[head]
            head += 1
            if dist[v] == depth:
                continue
            for j in range(offsets[v], offsets[v + 1]):
                w = owner[pairing[j]]
                if stamp[w] != s:
                    stamp[w] = s
                    dist[w] = dist[v] + 1
                    queue[tail] = w
                    tail += 1
        ends = 0
        for i in range(tail):
            v = queue[i]
            for j in range(offsets[v], offsets[v + 1]):
                if stamp[owner[pairing[j]]] == s:
                    ends += 1
        out[s] = ends == 2 * (tail - 1)
    return out


@njit(cache=True, nogil=True)
def count_short_cycles(offsets, owner, pairing, max_len):
    """Number of cycles (loops and multi-edges included) of length <= max_len."""
    n = offsets.shape[0] - 1
    onpath = np.zeros(n, np.bool_)
    pv = np.empty(max_len + 1, np.int64)
    pin = np.empty(max_len + 1, np.int64)
    pnext = np.empty(max_len + 1, np.int64)
    total = 0
    for s in range(n):
        depth = 0
        pv[0] = s
        pin[0] = -1
        pnext[0] = offsets[s]
        onpath[s] = True
        while depth >= 0:
            v = pv[depth]
            j = pnext[depth]
            if j >= offsets[v + 1]:
                onpath[v] = False
                depth -= 1
                continue
            pnext[depth] = j + 1
            if j == pin[depth]:
                continue
            p = pairing[j]
            w = owner[p]
            if w == s:
                total += 1
                continue
            if w < s or onpath[w] or depth + 1 >= max_len:
                continue
            depth += 1
            pv[depth] = w
            pin[depth] = p
            pnext[depth] = offsets[w]
            onpath[w] = True
    return total // 2
