"""Closed-form predictions for walks on random r-regular graphs.

All logarithms are natural. Unvisit rates are given as constants ``c`` with
per-step hazard ``c/n``; thresholds as ``u`` with the transition at step
``u*n``. Edge-process quantities are on the red-step clock.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .rng import PAIRS, make_rng
from .walks import WalkKind

OBJECTS = ("vacant_set", "vacant_net")
SIZE_OBJECTS = ("vacant_set", "vacant_set_edges", "vacant_net")


@dataclass(frozen=True)
class WalkModel:
    kind: WalkKind
    r: int

    def __post_init__(self):
        object.__setattr__(self, "kind", WalkKind.parse(self.kind))
        if self.r < 3:
            raise ValueError("r must be at least 3")
        if self.kind is WalkKind.EDGE_PROCESS and (self.r % 2 or self.r < 4):
            raise ValueError("edge-process predictions need even r >= 4")

    @property
    def d(self) -> int:
        return self.r // 2


@dataclass(frozen=True)
class PredictionRecord:
    model: WalkModel
    quantity: str
    value: float
    params: dict = field(default_factory=dict)

    def csv_row(self) -> list:
        p = self.params
        return [self.model.kind.value, self.quantity, self.model.r, p.get("n", ""),
                p.get("t", ""), self.value]


PREDICTION_COLUMNS = ["model", "quantity", "r", "n", "t", "value"]


class Target(enum.Enum):
    VERTEX = "vertex"
    EDGE_SET = "edge_set"                  # l edges at one vertex, simple walk
    EDGE = "edge"                          # one edge uncrossed
    ADJACENT_EDGE_PAIR = "adjacent_edges"  # two edges sharing a vertex uncrossed
    EDGE_VERTEX_PAIR = "edge_vertices"     # both endpoints of an edge unvisited
    PATH_TWO_VERTICES = "path_vertices"    # three vertices of a 2-path unvisited


def alpha(r: int, ell: int) -> float:
    """Rate at which a set of ``ell`` edges at one vertex stays uncrossed by
    a simple walk (hazard ``alpha/n`` per step)."""
    if not 1 <= ell <= r:
        raise ValueError(f"ell must be in 1..{r}")
    return ell / r * (2 - (1 / (r - 1) + ell * (r - 1) / (r * (r - 2) + ell)))


def _tree_set_rate(r: int, k: int) -> float:
    """Simple-walk rate for a connected set of ``k`` vertices inducing a tree:
    ``k (1 - f)`` with f the first-return probability of the contracted set in
    the r-regular tree."""
    internal = 2 * (k - 1)
    boundary = k * r - internal
    f = internal / (k * r) + boundary / (k * r) / (r - 1)
    return k * (1 - f)


def unvisit_rate(model: WalkModel, target: Target | str, ell: int | None = None) -> float:
    target = Target(target)
    r = model.r
    if model.kind is WalkKind.SIMPLE:
        if target is Target.VERTEX:
            return (r - 2) / (r - 1)
        if target is Target.EDGE_SET:
            if ell is None:
                raise ValueError("EDGE_SET needs ell")
            return alpha(r, ell)
        if target is Target.EDGE:
            return alpha(r, 1)
        if target is Target.ADJACENT_EDGE_PAIR:
            return alpha(r, 2)
        if target is Target.EDGE_VERTEX_PAIR:
            return _tree_set_rate(r, 2)
        if target is Target.PATH_TWO_VERTICES:
            return _tree_set_rate(r, 3)
    elif model.kind is WalkKind.NON_BACKTRACKING:
        table = {
            Target.VERTEX: 1.0,
            Target.EDGE_VERTEX_PAIR: 2 * (r - 1) / r,
            Target.PATH_TWO_VERTICES: (3 * r - 4) / r,
            Target.EDGE: 2 / r,
            Target.ADJACENT_EDGE_PAIR: 2 * (2 * r - 3) / (r * (r - 1)),
        }
        if target in table:
            return table[target]
    raise ValueError(f"no unvisit rate for {model.kind.value} / {target.value}")


def survival(c: float, n: float, t: float) -> float:
    """Probability of no visit in ``t`` steps at hazard ``c/n``."""
    if c < 0 or n <= 0 or t < 0:
        raise ValueError("need c >= 0, n > 0, t >= 0")
    return (1 + c / n) ** (-t)


def _edge_domain(model: WalkModel, n: int, t: float) -> float:
    dn = model.d * n
    if not 0 <= t <= dn:
        raise ValueError(f"edge-process predictions need 0 <= t <= d*n = {dn}")
    return (dn - t) / dn


def expected_size(model: WalkModel, obj: str, n: int, t: float) -> float:
    """Expected |R(t)| (``vacant_set``), |E(Gamma(t))| (``vacant_set_edges``)
    or |U(t)| (``vacant_net``)."""
    r = model.r
    m = r * n / 2
    if t < 0:
        raise ValueError("t must be non-negative")
    if model.kind is WalkKind.SIMPLE:
        rates = {"vacant_set": (n, (r - 2) / (r - 1)),
                 "vacant_set_edges": (m, 2 * (r - 2) / r),
                 "vacant_net": (m, 2 * (r - 2) / (r * (r - 1)))}
    elif model.kind is WalkKind.NON_BACKTRACKING:
        rates = {"vacant_set": (n, 1.0),
                 "vacant_set_edges": (m, 2 * (r - 1) / r),
                 "vacant_net": (m, 2 / r)}
    else:
        x = _edge_domain(model, n, t)
        d = model.d
        if obj == "vacant_set":
            return n * x**d
        if obj == "vacant_set_edges":
            return d * n * x ** (2 * d - 1)
        if obj == "vacant_net":
            return d * n - t
        raise ValueError(f"unknown object {obj!r}")
    if obj not in rates:
        raise ValueError(f"unknown object {obj!r}")
    base, c = rates[obj]
    return base * math.exp(-c * t / n)


def threshold(model: WalkModel, obj: str) -> float:
    """``u`` such that the vacant set / net becomes sub-critical at ``u*n``."""
    r = model.r
    lg = math.log(r - 1)
    if obj not in OBJECTS:
        raise ValueError(f"unknown object {obj!r}")
    if model.kind is WalkKind.SIMPLE:
        if obj == "vacant_set":
            return r * (r - 1) / (r - 2) ** 2 * lg
        return r * (r * r - 2 * r + 2) / (2 * (r - 2) ** 2) * lg
    if model.kind is WalkKind.NON_BACKTRACKING:
        if obj == "vacant_set":
            return r / (r - 2) * lg
        return r * (r - 1) / (2 * (r - 2)) * lg
    d = model.d
    if obj == "vacant_set":
        return d * (1 - (1 / (2 * d - 1)) ** (1 / (d - 1)))
    return float(d)


def threshold_rate_pair(model: WalkModel, obj: str) -> tuple[float, float]:
    """Rates of (one edge of the object, two adjacent edges of the object)."""
    if obj == "vacant_set":
        return (unvisit_rate(model, Target.EDGE_VERTEX_PAIR),
                unvisit_rate(model, Target.PATH_TWO_VERTICES))
    if obj == "vacant_net":
        return (unvisit_rate(model, Target.EDGE), unvisit_rate(model, Target.ADJACENT_EDGE_PAIR))
    raise ValueError(f"unknown object {obj!r}")


def threshold_from_rates(r: int, c1: float, c2: float) -> float:
    """Solve M(1) = 2 M(2) with E M(1) ~ n r e^{-c1 u} and
    E M(2) ~ n C(r,2) e^{-c2 u}: ``u = ln(r-1) / (c2 - c1)``."""
    if not c2 > c1 > 0:
        raise ValueError("need c2 > c1 > 0")
    return math.log(r - 1) / (c2 - c1)


def nbw_vacant_set_threshold_as_displayed(r: int) -> float:
    """The competing value ``(r-2)/r ln(r-1)``, with the reciprocal factor of the
    rate-based threshold. The oracle rejects it; it is kept for comparison."""
    return (r - 2) / r * math.log(r - 1)


def cover_time(model: WalkModel, obj: str, n: int) -> float:
    """Asymptotic vertex (``vertex``) or edge (``edge``) cover time."""
    r = model.r
    nl = n * math.log(n)
    if model.kind is WalkKind.SIMPLE:
        table = {"vertex": (r - 1) / (r - 2) * nl, "edge": r * (r - 1) / (2 * (r - 2)) * nl}
    elif model.kind is WalkKind.NON_BACKTRACKING:
        table = {"vertex": nl, "edge": r / 2 * nl}
    else:
        if obj == "edge":
            raise ValueError("no asymptotic edge cover time for the edge-process "
                             f"(only the lower bound d*n = {model.d * n})")
        table = {"vertex": float(model.d * n)}
    if obj not in table:
        raise ValueError(f"unknown cover object {obj!r}")
    return table[obj]


def edge_process_Nk(n: int, d: int, k: int, t: int) -> tuple[float, float]:
    """Expected number of vertices with ``2k`` unused points after ``t`` steps
    of the Pairs-process: (exact hypergeometric, asymptotic binomial form)."""
    dn = d * n
    if not 0 <= k <= d or not 0 <= t <= dn:
        raise ValueError("need 0 <= k <= d and 0 <= t <= d*n")
    exact = n * math.comb(t, d - k) * math.comb(dn - t, k) / math.comb(dn, d)
    asym = n * math.comb(d, k) * ((dn - t) / dn) ** k * (t / dn) ** (d - k)
    return exact, asym


def edge_process_N(n: int, d: int, t: int) -> np.ndarray:
    """Exact N_k(t) for k = 0..d."""
    return np.array([edge_process_Nk(n, d, k, t)[0] for k in range(d + 1)])


def pairs_process(n: int, d: int, seed, t: int) -> np.ndarray:
    """One run of the Pairs-process; returns counts of vertices by ``k`` where
    ``2k`` is the number of unused points left at the vertex."""
    if not 0 <= t <= d * n:
        raise ValueError("need 0 <= t <= d*n")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed, PAIRS)
    left = _kernels.pairs_process(n, d, t, rng.random(2 * t + 1))
    return np.bincount(left // 2, minlength=d + 1)


def mixing_time_bound(n: float) -> float:
    """120 ln n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return 120 * math.log(n)


def predict(model: WalkModel, n: int, t: float | None = None) -> list[PredictionRecord]:
    """Every prediction available for ``model`` at size ``n`` (and step ``t``)."""
    out = []
    for obj in OBJECTS:
        out.append(PredictionRecord(model, f"threshold_{obj[7:]}", threshold(model, obj) * n,
                                    {"n": n}))
    for obj in ("vertex", "edge"):
        try:
            out.append(PredictionRecord(model, f"{obj}_cover", cover_time(model, obj, n),
                                        {"n": n}))
        except ValueError:
            pass
    if t is not None:
        for obj in SIZE_OBJECTS:
            try:
                out.append(PredictionRecord(model, f"{obj}_size" if obj != "vacant_set_edges"
                                            else obj, expected_size(model, obj, n, t),
                                            {"n": n, "t": t}))
            except ValueError:
                pass
        if model.kind is WalkKind.EDGE_PROCESS and 0 <= t <= model.d * n:
            for k in range(model.d + 1):
                out.append(PredictionRecord(model, f"N{k}",
                                            edge_process_Nk(n, model.d, k, int(t))[0],
                                            {"n": n, "t": t, "k": k}))
    if model.kind is not WalkKind.EDGE_PROCESS:
        out.append(PredictionRecord(model, "unvisit_rate", unvisit_rate(model, Target.VERTEX)))
    return out
