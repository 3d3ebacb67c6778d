"""Run the ring and random table presets over several seeds and print seed-averaged metrics.

    python scripts/reproduce_tables.py --seeds 5 --steps 2000
"""

import argparse
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from weakest_link.cli import simulate
from weakest_link.config import preset

TABLES = ["ring-table1", "random-table2", "ring-table3", "random-table4"]


def final_row(config):
    f = simulate(config).final
    return config.output, (f.cum_pdr, f.fwd_per_dlv, f.avg_efficiency, f.avg_alpha)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--tables", nargs="+", default=TABLES, choices=TABLES)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    configs = [
        replace(c, steps=args.steps, seed=s)
        for name in args.tables
        for c in preset(name)
        for s in range(args.seeds)
    ]
    rows = defaultdict(list)
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        for output, values in pool.map(final_row, configs):
            rows[output].append([np.nan if v is None else v for v in values])

    print(f"{'run':40s} {'PDR':>8s} {'fwd/dlv':>8s} {'eff':>8s} {'alpha':>8s}")
    for output, vals in rows.items():
        cols = np.array(vals).T
        m = [c[~np.isnan(c)].mean() if (~np.isnan(c)).any() else np.nan for c in cols]
        print(f"{output:40s} {m[0]:8.4f} {m[1]:8.4f} {m[2]:8.4f} {m[3]:8.4f}")


if __name__ == "__main__":
    main()
