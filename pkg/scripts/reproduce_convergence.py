"""Train A2C and PPO on the desk preset over its five seeds and print the comparison.

    python3 scripts/reproduce_convergence.py [--config desk] [--out runs/desk] [--workers N]
"""

import argparse
import time

from ricbox.harness.config import parse_config
from ricbox.harness.run import compare


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--config", default="desk")
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    args = p.parse_args()
    cfg = parse_config(args.config)
    t0 = time.perf_counter()
    rep = compare(cfg, list(cfg.schedule.seeds), args.out, workers=args.workers)
    for r in rep["runs"]:
        print(f"{r['algorithm']:>4} seed {r['seed']}: final MA50 {r['final_ma50']:.4f}  plateau {r['plateau_episode']:>3}"
              f"  last-100 std {r['last100_std']:.4f}  random baseline {r['baseline_mean']:.4f}")
    print("median plateau episode:", rep["median_plateau_episode"])
    print("median last-100 std:   ", rep["median_last100_std"])
    print("median early MA50:     ", rep["median_early_mean50"])
    print("seeds beating baseline:", rep["seeds_beating_baseline"])
    print(f"finished in {time.perf_counter() - t0:.0f} s; artifacts in {args.out or cfg.io.output_dir}")


if __name__ == "__main__":
    main()
