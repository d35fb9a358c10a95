"""How fast does a walk eat a random cubic graph?

Run a simple and a non-backtracking walk on the same graph and watch the
unvisited vertices and edges disappear, next to the exponential laws.
"""

import numpy as np

from vacantlab import WalkModel, expected_size, init_walk, sample_simple_regular
from vacantlab.walks import run_to

n, r = 50_000, 3
g = sample_simple_regular(n, r, seed=1)
print(f"graph: n={g.n}, m={g.m}, rejections before a simple one: {g.retries}")

checkpoints = [int(x * n) for x in (0.5, 1, 2, 3, 4)]
for kind in ("simple", "nbw"):
    model = WalkModel(kind, r)
    state, tracker = init_walk(g, kind, seed=7)
    snaps = run_to(state, tracker, g, checkpoints)
    print(f"\n{kind} walk")
    print(f"{'t/n':>5} {'|R|/n':>8} {'pred':>8} {'|U|/m':>8} {'pred':>8}")
    for s in snaps:
        R = (n - s.visited_vertices) / n
        U = (g.m - s.visited_edges) / g.m
        pr = expected_size(model, "vacant_set", n, s.t) / n
        pu = expected_size(model, "vacant_net", n, s.t) / g.m
        print(f"{s.t / n:5.1f} {R:8.4f} {pr:8.4f} {U:8.4f} {pu:8.4f}")

# The non-backtracking walk never wastes a step on the edge it just used,
# so its vacant set shrinks at rate 1 instead of 1/2.
