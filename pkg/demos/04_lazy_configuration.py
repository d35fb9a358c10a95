"""Building the graph while walking on it.

The walk reveals the pairing of half-edges only where it steps. Completing
the pairing afterwards gives the vacant set as a random multigraph with its
own degree sequence, which the Molloy-Reed value L classifies.
"""

import numpy as np

from vacantlab import (WalkModel, components, extend_pairing_for_vacant_set, molloy_reed_L,
                       threshold, walk_generate)
from vacantlab.structure import Subgraph

n, r = 100_000, 3
u = threshold(WalkModel("simple", r), "vacant_set")
for frac in (0.6, 0.9, 1.1, 1.4):
    t = int(frac * u * n)
    partial, state, tracker = walk_generate(n, r, "simple", seed=11, t_stop=t)
    vacant, ids = extend_pairing_for_vacant_set(partial, tracker, seed=11)
    deg = vacant.degrees
    L = molloy_reed_L(np.bincount(deg)) if vacant.n else float("nan")
    sub = Subgraph(np.arange(vacant.n), vacant.edges, vacant.n)
    print(f"t = {frac:.1f} u n: revealed pairs {partial.revealed_pairs().shape[0]:6d}, "
          f"|R| = {vacant.n:6d}, L = {L:+.4f}, C1 = {components(sub).C1}")
