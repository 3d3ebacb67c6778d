"""Distribution of final PDR and steps-to-0.9 across seeds for one ring configuration.

Useful for judging how close a seed-averaged criterion sits to its threshold.
"""

import argparse

import numpy as np

from weakest_link import GameParams, LearningConfig, StrategyKind, generate_ring, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=40)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--epsilon", type=float, default=0.05)
    ap.add_argument("--init-alpha", type=float, default=0.0)
    ap.add_argument("--strategy", default="weakest-link", choices=[s.value for s in StrategyKind])
    ap.add_argument("--no-shield", action="store_true", help="apply negative deltas to notified nodes")
    ap.add_argument("--block", type=int, default=5, help="seed block size for block means")
    args = ap.parse_args()

    learning = LearningConfig(
        epsilon=args.epsilon, init_alpha=args.init_alpha, shield_notified=not args.no_shield
    )
    scenario = generate_ring(25, 6)
    pdr, t90 = [], []
    for seed in range(args.seeds):
        series = run(scenario, GameParams(), learning, args.steps, seed, StrategyKind(args.strategy))
        pdr.append(series.final.cum_pdr)
        t90.append(series.steps_to_alpha(0.9))
    pdr = np.array(pdr)
    reached = [t for t in t90 if t is not None]
    print(f"PDR mean {pdr.mean():.4f}  sd {pdr.std(ddof=1) if len(pdr) > 1 else 0:.4f}"
          f"  min {pdr.min():.4f}  max {pdr.max():.4f}")
    blocks = [pdr[i:i + args.block].mean() for i in range(0, len(pdr), args.block)]
    print("block means", " ".join(f"{b:.3f}" for b in blocks))
    if reached:
        print(f"t90 median {int(np.median(reached))}  reached {len(reached)}/{len(t90)}")
    else:
        print("t90 never reached")


if __name__ == "__main__":
    main()
