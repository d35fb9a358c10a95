"""The giant component of the vacant net dies near 7.5 ln 2 * n steps.

We sweep the walk through multiples of the predicted threshold and record the
two largest components and Q = 2 M(2) - M(1) of the red-degree histogram
(scaled by n), then locate where Q changes sign.
"""

from vacantlab import ExperimentConfig, WalkModel, threshold
from vacantlab.harness import run_replicas, threshold_scan

n = 50_000
u = threshold(WalkModel("simple", 3), "vacant_net")
grid = [0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5]
cfg = ExperimentConfig("simple", 3, n, seeds=[0, 1, 2], grid=grid, grid_object="vacant_net",
                       quantities=("vacant_net_components",), graph="simple")

print(f"predicted threshold: {u:.4f} n = {u * n:.0f} steps")
print(f"{'t/(u n)':>8} {'C1':>7} {'C2':>5} {'Q/n':>8} {'phase':>6}")
res = run_replicas(cfg)[0]
for g, t in zip(grid, cfg.resolved_checkpoints()):
    v = res.values[t]
    phase = {1: "super", 0: "window", -1: "sub"}[v["vacant_net_phase"]]
    q = v["vacant_net_Q"] / n
    print(f"{g:8.2f} {v['vacant_net_C1']:7d} {v['vacant_net_C2']:5d} {q:8.4f} {phase:>6}")

scan = threshold_scan(ExperimentConfig(
    "simple", 3, n, seeds=[0, 1, 2], grid=[0.8 + 0.02 * i for i in range(21)],
    grid_object="vacant_net", graph="simple"))
print(f"\nQ changes sign at {scan.q_crossing / n:.3f} n "
      f"(95% CI {scan.q_ci[0] / n:.3f}..{scan.q_ci[1] / n:.3f}); predicted {u:.3f} n")
