"""Plot normalized reward curves from a comparison run and a network snapshot from a scene log.

    python3 scripts/plot_figures.py --compare runs/desk --scenes runs/desk/ppo_seed0/scenes.jsonl --out figures

Needs matplotlib (pip install -e .[plots]).
"""

import argparse
import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ricbox.env.render import read_scenes  # noqa: E402
from ricbox.harness.analysis import moving_average  # noqa: E402

COLORS = {"good": "tab:green", "fair": "tab:orange", "poor": "tab:red"}


def plot_curves(compare_dir: Path, out: Path) -> Path:
    curves = defaultdict(lambda: defaultdict(list))
    with (compare_dir / "compare_curves.csv").open() as fh:
        for row in csv.DictReader(fh):
            curves[row["algorithm"]][int(row["seed"])].append(float(row["normalized_reward"]))
    fig, ax = plt.subplots(figsize=(7, 4))
    for algo, seeds in sorted(curves.items()):
        ma = np.array([moving_average(v, 50) for v in seeds.values()])
        x = np.arange(ma.shape[1])
        ax.plot(x, np.median(ma, axis=0), label=f"{algo.upper()} (median of {len(ma)} seeds)")
        ax.fill_between(x, ma.min(axis=0), ma.max(axis=0), alpha=0.2)
    ax.set_xlabel("episode")
    ax.set_ylabel("average normalized reward (50-episode MA)")
    ax.legend()
    ax.grid(alpha=0.3)
    path = out / "convergence.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path


def plot_scene(scene_file: Path, out: Path, index: int) -> Path:
    scene = read_scenes(scene_file)[index]
    fig, ax = plt.subplots(figsize=(5, 5))
    for bs in scene.bss:
        ax.add_patch(plt.Circle((bs["x"], bs["y"]), bs["range_m"], fill=False, ls="--", color="grey"))
        ax.plot(bs["x"], bs["y"], "ks", ms=9)
    ues = {u["id"]: u for u in scene.ues}
    byid = {b["id"]: b for b in scene.bss}
    for ue, bs in scene.edges:
        ax.plot([ues[ue]["x"], byid[bs]["x"]], [ues[ue]["y"], byid[bs]["y"]], "b-", lw=1)
    for u in scene.ues:
        ax.plot(u["x"], u["y"], "o", color=COLORS[u["bucket"]])
        ax.annotate(str(u["id"]), (u["x"], u["y"]), textcoords="offset points", xytext=(4, 4), fontsize=8)
    m = scene.metrics
    ax.set_title(f"slot {scene.slot}: connected {m['connected']}, fairness {m['fairness']:.2f}")
    xs = [n["x"] for n in scene.bss + scene.ues]
    ys = [n["y"] for n in scene.bss + scene.ues]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    ax.set_xlim(min(xs) - pad, max(xs) + pad)
    ax.set_ylim(min(ys) - pad, max(ys) + pad)
    ax.set_aspect("equal")
    path = out / f"scene_{scene.slot}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--compare", type=Path, help="directory holding compare_curves.csv")
    p.add_argument("--scenes", type=Path, help="scenes.jsonl written by a training run")
    p.add_argument("--scene-index", type=int, default=-1)
    p.add_argument("--out", type=Path, default=Path("figures"))
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    if args.compare:
        print("wrote", plot_curves(args.compare, args.out))
    if args.scenes:
        print("wrote", plot_scene(args.scenes, args.out, args.scene_index))


if __name__ == "__main__":
    main()
