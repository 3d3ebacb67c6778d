"""Command line entry point: ``weakest-link simulate | check-nash | validate``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .config import KEYS, ConfigError, RunConfig, _fmt, parse_config, preset, PRESETS
from .game import check_nash
from .metrics import MetricsSeries
from .simulation import Simulation
from .topology import InvalidParameter, validate

log = logging.getLogger("weakest_link")

SERIES_HEADER = ["step", "avg_alpha", "cum_pdr", "fwd_per_dlv", "avg_efficiency"]
TOTALS_HEADER = ["generated", "delivered", "forwards"]


def _num(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def series_rows(series: MetricsSeries) -> list[list[str]]:
    return [
        [str(m.step), _num(m.avg_alpha), _num(m.cum_pdr), _num(m.fwd_per_dlv), _num(m.avg_efficiency)]
        for m in series.per_step
    ]


def simulate(config: RunConfig) -> MetricsSeries:
    sim = Simulation(
        config.scenario.build(), config.game, config.learning, config.strategy, config.seed
    )
    return sim.run(config.steps)


def write_outputs(config: RunConfig, series: MetricsSeries, out_dir: Path) -> tuple[Path, Path]:
    prefix = out_dir / config.output
    prefix.parent.mkdir(parents=True, exist_ok=True)
    series_path = Path(f"{prefix}-series.csv")
    summary_path = Path(f"{prefix}-summary.csv")
    rows = series_rows(series)
    with open(series_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SERIES_HEADER)
        w.writerows(rows)
    t = series.totals
    config_cols = [(key, section, name) for key, (section, name, _) in KEYS.items()]
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SERIES_HEADER + TOTALS_HEADER + ["label"] + [k for k, _, _ in config_cols])
        echo = [
            _fmt(getattr(getattr(config, section) if section else config, name))
            for _, section, name in config_cols
        ]
        w.writerow(rows[-1] + [str(t.generated), str(t.delivered), str(t.forwards)]
                   + [config.strategy.label] + echo)
    return series_path, summary_path


def _run_one(args: tuple[RunConfig, Path]) -> tuple[str, str | None]:
    config, out_dir = args
    try:
        paths = write_outputs(config, simulate(config), out_dir)
        return str(paths[0]), None
    except (OSError, InvalidParameter) as exc:
        return config.output, f"{type(exc).__name__}: {exc}"


def run_experiment(configs: Sequence[RunConfig], out_dir: Path, jobs: int = 1) -> int:
    """Run every config and write its CSV files; returns a process exit status."""
    work = [(c, Path(out_dir)) for c in configs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    status = 0
    for where, err in results:
        if err:
            log.error("run %s failed: %s", where, err)
            status = 1
        else:
            log.info("wrote %s", where)
    return status


def _load(args: argparse.Namespace) -> list[RunConfig]:
    configs = preset(args.preset) if getattr(args, "preset", None) else [parse_config(args.config)]
    if getattr(args, "seed", None) is not None:
        configs = [replace(c, seed=args.seed) for c in configs]
    return configs


def cmd_simulate(args: argparse.Namespace) -> int:
    return run_experiment(_load(args), Path(args.out), args.jobs)


def cmd_check_nash(args: argparse.Namespace) -> int:
    config = parse_config(args.config)
    scenario = config.scenario.build()
    alpha = args.alpha if args.alpha is not None else config.learning.init_alpha
    profile = [alpha] * scenario.num_nodes
    report = check_nash(scenario, profile, config.game, args.grid, args.tol)
    print(f"profile alpha={alpha}: is_nash={report.is_nash}")
    for node, (a, gain) in sorted(report.best_deviations.items()):
        print(f"  node {node}: deviate to alpha={a:g} gains {gain:.6g}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    config = parse_config(args.config)
    problems = validate(config.scenario.build())
    for v in problems:
        where = f"route {v.route_index}: " if v.route_index is not None else ""
        print(f"{v.kind}: {where}{v.detail}")
    if not problems:
        print("ok")
    return 1 if problems else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weakest-link", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a preset or a config file")
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--config")
    sim.add_argument("--seed", type=int, help="override run.seed")
    sim.add_argument("--out", default="runs", help="output directory")
    sim.add_argument("--jobs", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    nash = sub.add_parser("check-nash", help="grid check of a uniform profile")
    nash.add_argument("--config", required=True)
    nash.add_argument("--grid", type=float, default=0.1)
    nash.add_argument("--tol", type=float, default=1e-9)
    nash.add_argument("--alpha", type=float, help="profile value (default learn.init_alpha)")
    nash.set_defaults(func=cmd_check_nash)

    val = sub.add_parser("validate", help="check the scenario built from a config")
    val.add_argument("--config", required=True)
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s"
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
