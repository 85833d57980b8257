"""Run the full-size preset (5 BS, 10 UE, 4x384 nets, 1000 slots) for a few episodes.

    python3 scripts/paper_preset_smoke.py [--episodes 2] [--out runs/paper_smoke]

Pass --episodes 600 for the full-length run (roughly 2 s per episode on one core).
"""

import argparse
import dataclasses

from ricbox.harness.config import load_preset
from ricbox.harness.run import train


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--episodes", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="runs/paper_smoke")
    args = p.parse_args()
    cfg = load_preset("paper")
    cfg = dataclasses.replace(cfg, schedule=dataclasses.replace(cfg.schedule, episodes=args.episodes))
    res = train(cfg, args.seed, args.out)
    for row in res.rows:
        print(f"episode {row['episode']}: mean reward {row['mean_reward']:.4f}  "
              f"sum rate {row['sum_rate_mbps']:.3f} Mbps  fairness {row['fairness']:.3f}")
    print("artifacts:", res.artifacts.out_dir)


if __name__ == "__main__":
    main()
