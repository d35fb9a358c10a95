"""The unvisited-edge walk covers an even-degree graph in linear time.

For even r the red (new-edge) steps form closed tours, and the number of
vertices with 2k unused edges follows a hypergeometric law. For odd r the
walk gets stranded at odd vertices and the cover time picks up a log factor.
"""

import math

from vacantlab import edge_process_Nk, init_walk, sample_regular_configuration
from vacantlab.harness import cover_time_study
from vacantlab.walks import advance_red

n, d = 100_000, 2
g = sample_regular_configuration(n, 2 * d, seed=3)
state, tracker = init_walk(g, "edge", seed=3)
print("red degree law, r = 4")
print(f"{'t_R/n':>6} {'k':>2} {'observed':>9} {'exact':>10}")
for frac in (0.25, 1.0, 1.75):
    advance_red(state, tracker, g, int(frac * n))
    hist = tracker.red_histogram(2 * d)
    for k in range(d + 1):
        exact, _ = edge_process_Nk(n, d, k, state.t_red)
        print(f"{frac:6.2f} {k:2d} {hist[2 * k]:9d} {exact:10.1f}")
print(f"total/red steps at t_R = {state.t_red}: {state.t / state.t_red:.4f}")

print("\nvertex cover time / n")
rows = cover_time_study(["edge"], [3, 4, 5, 6], [5_000, 20_000, 80_000], seeds=range(3))
for row in rows:
    r, size, over_n = row[1], row[2], row[6]
    print(f"r={r} n={size:6d}  T/n = {over_n:6.3f}  T/(n ln n) = {over_n / math.log(size):.3f}")
