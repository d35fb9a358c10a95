"""``vacantlab`` command line: gen, walk, predict, sweep, threshold, cover, validate.

Exit codes: 0 success, 1 usage error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness, theory
from .graphgen import canonical_edges, graph_stats, write_edge_list
from .harness import ExperimentConfig, format_table
from .rng import WALK, make_rng
from .walks import init_walk, run_to, snapshot_header, trajectory

MODELS = ("simple", "nbw", "edge")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODELS, default="simple")
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seeds", type=int, default=1, help="number of replicas")
    p.add_argument("--seed-base", type=int, default=0, help="first seed; replica i uses base+i")
    p.add_argument("--out", default=None, help="output file or directory (default: stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--config", default=None, help="key=value file; its entries override flags")
    p.add_argument("--nice-only", action="store_true")
    p.add_argument("--clock", choices=("total", "red"), default="total")
    p.add_argument("--graph", choices=("configuration", "simple"), default="configuration")


def _floats(s: str) -> list[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _ints(s: str) -> list[int]:
    return [int(float(x)) for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="vacantlab", description="Vacant set and vacant net experiments.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("gen", help="sample a graph and write its edge list")
    _common(p)

    p = sub.add_parser("walk", help="one walk: snapshots at checkpoints")
    _common(p)
    p.add_argument("--checkpoints", type=_ints, default=None, help="comma-separated steps")
    p.add_argument("--trajectory", default=None, help="write `t from to edge color` lines here")
    p.add_argument("--steps", type=int, default=None, help="trajectory length")

    p = sub.add_parser("predict", help="closed-form values")
    _common(p)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--show-discrepancies", action="store_true")

    p = sub.add_parser("sweep", help="run an experiment and write its report")
    _common(p)
    p.add_argument("--checkpoints", type=_ints, default=None)
    p.add_argument("--grid", type=_floats, default=None, help="multiples of the threshold")
    p.add_argument("--object", choices=theory.OBJECTS, default="vacant_set")

    p = sub.add_parser("threshold", help="locate the Q crossing and the C1 collapse")
    _common(p)
    p.add_argument("--grid", type=_floats, default=None)
    p.add_argument("--object", choices=theory.OBJECTS, default="vacant_set")

    p = sub.add_parser("cover", help="cover-time study")
    _common(p)
    p.add_argument("--models", default=None, help="comma-separated, default --model")
    p.add_argument("--r-list", type=_ints, default=None)
    p.add_argument("--n-list", type=_ints, default=None)

    p = sub.add_parser("validate", help="acceptance suite")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.add_argument("--out", default=None)
    return ap


def read_config(path) -> list[str]:
    """Turn ``key = value`` lines into flag tokens."""
    tokens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() not in ("false", "no", "off"):
            tokens += [flag, value]
    return tokens


def parse(argv) -> argparse.Namespace:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_usage(sys.stderr)
        raise UsageError("a subcommand is required")
    if getattr(args, "config", None):
        try:
            extra = read_config(args.config)
        except OSError as exc:
            raise UsageError(str(exc)) from exc
        args = ap.parse_args(list(argv) + extra)
    return args


def _seeds(args) -> list[int]:
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    return list(range(args.seed_base, args.seed_base + args.seeds))


def _emit(text: str, out) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    g = harness.sample_graph(args.n, args.r, args.seed_base, args.graph)
    if args.out:
        write_edge_list(g, args.out)
    else:
        sys.stdout.write(f"{g.n} {args.r}\n")
        sys.stdout.write("".join(f"{u} {v}\n" for u, v in canonical_edges(g)))
    s = graph_stats(g)
    print(f"n={s.n} r={s.r} simple={s.simple} nice={s.nice_count} short_cycles="
          f"{s.small_cycle_count} retries={g.retries}", file=sys.stderr)
    return 0


def cmd_walk(args) -> int:
    g = harness.sample_graph(args.n, args.r, args.seed_base, args.graph)
    state, tracker = init_walk(g, args.model, 0, make_rng(args.seed_base, WALK))
    if args.trajectory:
        steps = args.steps if args.steps is not None else args.n
        recs = trajectory(state, tracker, g, steps, debug=args.model == "edge" and args.r % 2 == 0)
        Path(args.trajectory).write_text("".join(r.line() + "\n" for r in recs))
    cps = args.checkpoints if args.checkpoints is not None else [args.n * k for k in range(6)]
    cps = [c for c in cps if c >= state.t]
    snaps = run_to(state, tracker, g, cps)
    top = int(g.degrees.max())
    _emit(format_table(snapshot_header(top), [s.csv_row() for s in snaps], args.format), args.out)
    return 0


def cmd_predict(args) -> int:
    model = theory.WalkModel(args.model, args.r)
    recs = theory.predict(model, args.n, args.t)
    rows = [r.csv_row() for r in recs]
    if args.show_discrepancies and model.kind.value == "nbw":
        u = theory.nbw_vacant_set_threshold_as_displayed(args.r)
        rows.append([model.kind.value, "threshold_set_as_displayed", args.r, args.n, "", u * args.n])
    _emit(format_table(theory.PREDICTION_COLUMNS, rows, args.format), args.out)
    return 0


def _config(args, **extra) -> ExperimentConfig:
    extra.setdefault("out_dir", args.out)
    return ExperimentConfig(args.model, args.r, args.n, _seeds(args), nice_only=args.nice_only,
                            clock=args.clock, graph=args.graph, **extra)


def cmd_sweep(args) -> int:
    cfg = _config(args, checkpoints=args.checkpoints, grid=args.grid, grid_object=args.object)
    report = harness.aggregate(cfg, harness.run_replicas(cfg))
    if args.out:
        for p in report.write(args.out, args.format):
            print(p)
    else:
        sys.stdout.write(format_table(harness.COMPARISON_COLUMNS, report.comparison, args.format))
    return 0


def cmd_threshold(args) -> int:
    cfg = _config(args, grid=args.grid or [round(0.7 + 0.02 * i, 10) for i in range(31)],
                  grid_object=args.object, out_dir=None)
    scan = harness.threshold_scan(cfg)
    cols = ["object", "predicted", "q_crossing", "q_ci_low", "q_ci_high", "collapse",
            "collapse_ci_low", "collapse_ci_high", "relative_error"]
    row = [scan.obj, scan.predicted, scan.q_crossing, *scan.q_ci, scan.collapse,
           *scan.collapse_ci, scan.relative_error]
    _emit(format_table(cols, [row], args.format), args.out)
    return 0


def cmd_cover(args) -> int:
    models = args.models.split(",") if args.models else [args.model]
    rows = harness.cover_time_study(models, args.r_list or [args.r], args.n_list or [args.n],
                                    _seeds(args), graph=args.graph)
    _emit(format_table(harness.COVER_COLUMNS, rows, args.format), args.out)
    return 0


def cmd_validate(args) -> int:
    only = args.only.split(",") if args.only else None
    lines = []

    def echo(s):
        print(s, flush=True)
        lines.append(s)

    status, _ = harness.validate(args.profile, only=only, echo=echo)
    if args.out:
        _emit("\n".join(lines) + "\n", args.out)
    return status


COMMANDS = {"gen": cmd_gen, "walk": cmd_walk, "predict": cmd_predict, "sweep": cmd_sweep,
            "threshold": cmd_threshold, "cover": cmd_cover, "validate": cmd_validate}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parse(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"vacantlab: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"vacantlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
