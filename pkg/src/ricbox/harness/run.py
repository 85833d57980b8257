"""Training, greedy evaluation, A2C-vs-PPO comparison and random baselines."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ricbox import __version__
from ricbox.agents.a2c import a2c_update
from ricbox.agents.common import ActorCritic, LossReport
from ricbox.agents.direct import DirectEnv
from ricbox.agents.ppo import ppo_update
from ricbox.agents.rollout import RolloutBuffer, collect_rollout, run_greedy_episode, run_random_episode
from ricbox.env.network import RanEnv
from ricbox.env.render import SceneLog, render
from ricbox.errors import CheckpointError, NumericError
from ricbox.harness import analysis
from ricbox.harness.config import RunConfig
from ricbox.ric.bus import BusEnv
from ricbox.ric.store import TimeSeriesStore
from ricbox.rlcore.checkpoint import load_checkpoint, save_checkpoint

log = logging.getLogger(__name__)

METRIC_FIELDS = ("episode", "steps", "mean_reward", "sum_rate_mbps", "fairness",
                 "actor_loss", "critic_loss", "entropy", "wall_ms")


def episode_seed(seed: int, episode: int) -> int:
    return int(np.random.SeedSequence([seed, episode]).generate_state(1)[0])


def make_env(cfg: RunConfig, transport: str = "bus", store: TimeSeriesStore | None = None):
    ran = RanEnv(cfg.scenario, cfg.channel, cfg.reward)
    if transport == "bus":
        return BusEnv(ran, cfg.schedule.slots_per_episode, store=store)
    if transport == "direct":
        return DirectEnv(ran, cfg.schedule.slots_per_episode)
    raise ValueError(f"unknown transport {transport!r}")


class Trainer:
    """Networks, optimizers and RNG streams of one (algorithm, seed) run."""

    def __init__(self, cfg: RunConfig, obs_dim: int, n_actions: int, seed: int):
        self.cfg = cfg
        init_ss, policy_ss, update_ss = np.random.SeedSequence(seed).spawn(3)
        a = cfg.agent
        self.nets = ActorCritic.create(obs_dim, n_actions, a.hidden_layers, a.hidden_width, a.actor_lr, a.critic_lr,
                                       np.random.default_rng(init_ss), a.max_grad_norm)
        self.policy_rng = np.random.default_rng(policy_ss)
        self.update_rng = np.random.default_rng(update_ss)
        self.algorithm = a.algorithm
        self._a2c = cfg.a2c()
        self._ppo = cfg.ppo()

    def update(self, buffer: RolloutBuffer) -> LossReport:
        if self.algorithm == "a2c":
            buffer.compute(self._a2c.gamma, self._a2c.normalize_advantages)
            return a2c_update(buffer, self.nets, self._a2c)
        buffer.compute(self._ppo.gamma, self._ppo.normalize_advantages)
        return ppo_update(buffer, self.nets, self._ppo, self.update_rng)


@dataclass
class RunArtifacts:
    out_dir: Path | None
    metrics_csv: Path | None = None
    checkpoints: list[Path] = field(default_factory=list)
    scene_log: Path | None = None
    spill_file: Path | None = None
    manifest: Path | None = None


@dataclass
class TrainResult:
    algorithm: str
    seed: int
    rows: list[dict]
    rewards: list[list[float]]  # per-slot rewards, per episode
    trainer: Trainer
    artifacts: RunArtifacts

    @property
    def episode_rewards(self) -> np.ndarray:
        return np.array([r["mean_reward"] for r in self.rows])


def format_row(row: dict) -> list[str]:
    return [repr(row[k]) if isinstance(row[k], float) else str(row[k]) for k in METRIC_FIELDS]


def metrics_csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(METRIC_FIELDS)
    for row in rows:
        w.writerow(format_row(row))
    return buf.getvalue()


def run_dir(cfg: RunConfig, seed: int, root=None) -> Path:
    return Path(root if root is not None else cfg.io.output_dir) / f"{cfg.agent.algorithm}_seed{seed}"


def _save_pair(trainer: Trainer, out: Path, tag: str) -> list[Path]:
    return [save_checkpoint(out / f"{tag}_actor.rlck", trainer.nets.actor),
            save_checkpoint(out / f"{tag}_critic.rlck", trainer.nets.critic)]


def train(cfg: RunConfig, seed: int, out_dir=None, transport: str = "bus", write: bool = True) -> TrainResult:
    """Train one agent; with ``write`` the metrics CSV, checkpoints, scenes, spill and manifest go to ``out_dir``."""
    t_start = time.time()
    out = Path(out_dir) if out_dir is not None else run_dir(cfg, seed)
    arts = RunArtifacts(out if write else None)
    store = None
    scene_log = None
    if write:
        out.mkdir(parents=True, exist_ok=True)
        (out / "checkpoints").mkdir(exist_ok=True)
        arts.metrics_csv = out / "metrics.csv"
        if cfg.io.spill and transport == "bus":
            arts.spill_file = out / "kpi_spill.bin"
            store = TimeSeriesStore(arts.spill_file)
        arts.scene_log = out / "scenes.jsonl"
        scene_log = SceneLog(arts.scene_log)

    env = make_env(cfg, transport, store)
    trainer = Trainer(cfg, env.obs_dim, env.n_actions, seed)
    n_ep = cfg.schedule.episodes
    scene_eps = {e if e >= 0 else n_ep + e for e in cfg.io.scene_episodes}
    slots = cfg.schedule.slots_per_episode
    rows, rewards = [], []
    global_slot = [0]

    def draw(state, metrics):
        global_slot[0] += 1
        scene_log.write(render(state, metrics, cfg.channel, slot=global_slot[0]))

    csv_fh = arts.metrics_csv.open("w", newline="") if write else None
    writer = csv.writer(csv_fh, lineterminator="\n") if write else None
    if writer:
        writer.writerow(METRIC_FIELDS)
    try:
        for ep in range(n_ep):
            t0 = time.perf_counter()
            env.observer = draw if (write and ep in scene_eps) else None
            if env.observer is None:
                global_slot[0] += slots
            env.reset(episode_seed(seed, ep))
            try:
                traj = collect_rollout(env, trainer.nets.actor, trainer.nets.critic, slots, trainer.policy_rng)
                report = trainer.update(RolloutBuffer([traj]))
            except NumericError as e:
                last = arts.checkpoints[-2] if len(arts.checkpoints) >= 2 else None
                raise NumericError(f"episode {ep}: {e} (last checkpoint: {last})") from e
            row = {
                "episode": ep,
                "steps": len(traj),
                "mean_reward": float(np.mean(traj.rewards)),
                "sum_rate_mbps": float(np.mean(traj.sum_rates)),
                "fairness": float(np.mean(traj.fairness)),
                "actor_loss": report.actor_loss,
                "critic_loss": report.critic_loss,
                "entropy": report.entropy,
                "wall_ms": round((time.perf_counter() - t0) * 1000.0, 3) if cfg.io.wall_clock else 0.0,
            }
            rows.append(row)
            rewards.append(list(traj.rewards))
            if writer:
                writer.writerow(format_row(row))
                every = cfg.io.checkpoint_every
                if every and (ep + 1) % every == 0 and ep + 1 < n_ep:
                    arts.checkpoints += _save_pair(trainer, out / "checkpoints", f"ep{ep + 1:05d}")
        if write:
            arts.checkpoints += _save_pair(trainer, out, "final")
    finally:
        if csv_fh:
            csv_fh.close()
        if store:
            store.close()
        if scene_log:
            scene_log.close()

    if write:
        arts.manifest = out / "manifest.json"
        manifest = {
            "config_hash": cfg.config_hash(),
            "config": cfg.to_dict(),
            "seed": seed,
            "algorithm": cfg.agent.algorithm,
            "transport": transport,
            "code_version": __version__,
            "episodes": n_ep,
            "metrics_csv": arts.metrics_csv.name,
            "checkpoints": [str(p.relative_to(out)) for p in arts.checkpoints],
            "scene_log": arts.scene_log.name,
            "spill_file": arts.spill_file.name if arts.spill_file else None,
            "wall_time_s": round(time.time() - t_start, 3),
        }
        arts.manifest.write_text(json.dumps(manifest, indent=2))
    return TrainResult(cfg.agent.algorithm, seed, rows, rewards, trainer, arts)


def random_baseline(cfg: RunConfig, seed: int, episodes: int = 20) -> float:
    """Mean episode reward of the uniform-random policy on the run's first episodes."""
    env = make_env(cfg, "direct")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xBA5E]))
    means = []
    for ep in range(episodes):
        traj = run_random_episode(env, episode_seed(seed, ep), cfg.schedule.slots_per_episode, rng)
        means.append(float(np.mean(traj.rewards)))
    return float(np.mean(means))


def resolve_actor_checkpoint(path) -> Path:
    p = Path(path)
    if p.is_dir():
        p = p / "final_actor.rlck"
    return p


def evaluate(checkpoint, cfg: RunConfig, episodes: int, seed: int, transport: str = "bus") -> dict:
    """Greedy rollouts of a stored actor; reports mean and std over episodes."""
    actor = load_checkpoint(resolve_actor_checkpoint(checkpoint))
    env = make_env(cfg, transport)
    return evaluate_actor(actor, env, cfg, episodes, seed)


def evaluate_actor(actor, env, cfg: RunConfig, episodes: int, seed: int) -> dict:
    if actor.in_dim != env.obs_dim or actor.out_dim != env.n_actions:
        raise CheckpointError(
            f"checkpoint maps {actor.in_dim} -> {actor.out_dim}, config needs {env.obs_dim} -> {env.n_actions}")
    rewards, rates, fair = [], [], []
    for ep in range(episodes):
        # evaluation episodes are offset so they never replay training layouts
        traj = run_greedy_episode(env, actor, episode_seed(seed, 1_000_000 + ep), cfg.schedule.slots_per_episode)
        rewards.append(float(np.mean(traj.rewards)))
        rates.append(float(np.mean(traj.sum_rates)))
        fair.append(float(np.mean(traj.fairness)))
    return {
        "episodes": episodes,
        "mean_reward": float(np.mean(rewards)),
        "std_reward": float(np.std(rewards)),
        "mean_sum_rate_mbps": float(np.mean(rates)),
        "std_sum_rate_mbps": float(np.std(rates)),
        "mean_fairness": float(np.mean(fair)),
        "episode_rewards": rewards,
    }


# --- comparison ---------------------------------------------------------------------------------

@dataclass
class RunSummary:
    algorithm: str
    seed: int
    final_ma50: float
    plateau_episode: int
    early_mean50: float
    last100_std: float
    baseline_mean: float

    @property
    def beats_baseline(self) -> bool:
        return analysis.beats_baseline(self.final_ma50, self.baseline_mean)


def summarize(algorithm: str, seed: int, episode_rewards, baseline: float) -> RunSummary:
    x = np.asarray(episode_rewards)
    return RunSummary(
        algorithm=algorithm,
        seed=seed,
        final_ma50=analysis.final_average(x, 50),
        plateau_episode=analysis.plateau_episode(x, 50, 0.9),
        early_mean50=float(x[:50].mean()),
        last100_std=analysis.tail_std(x, 100),
        baseline_mean=baseline,
    )


def _job(args):
    cfg, algorithm, seed, out_root, write = args
    c = cfg.with_algorithm(algorithm)
    res = train(c, seed, run_dir(c, seed, out_root), write=write)
    return algorithm, seed, res.rows, res.rewards


def compare(cfg: RunConfig, seeds, out_dir=None, workers: int | None = None, write: bool = True,
            baseline_episodes: int = 20) -> dict:
    """Train A2C and PPO on the same seeds and report convergence statistics."""
    seeds = list(seeds)
    if len(seeds) < 3:
        raise ValueError("compare needs at least 3 seeds")
    out_root = Path(out_dir if out_dir is not None else cfg.io.output_dir)
    jobs = [(cfg, algo, s, out_root, write) for algo in ("a2c", "ppo") for s in seeds]
    workers = workers or min(len(jobs), os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]

    baselines = {s: random_baseline(cfg, s, baseline_episodes) for s in seeds}
    summaries, curves = [], []
    full = cfg.reward.full_reward
    for algo, seed, rows, _ in results:
        x = [r["mean_reward"] for r in rows]
        summaries.append(summarize(algo, seed, x, baselines[seed]))
        for r in rows:
            curves.append({"algorithm": algo, "seed": seed, "episode": r["episode"],
                           "mean_reward": r["mean_reward"], "normalized_reward": r["mean_reward"] / full,
                           "sum_rate_mbps": r["sum_rate_mbps"], "fairness": r["fairness"]})

    def med(algo, attr):
        return float(np.median([getattr(s, attr) for s in summaries if s.algorithm == algo]))

    report = {
        "seeds": seeds,
        "runs": [dict(vars(s), beats_baseline=s.beats_baseline) for s in summaries],
        "median_plateau_episode": {a: med(a, "plateau_episode") for a in ("a2c", "ppo")},
        "median_last100_std": {a: med(a, "last100_std") for a in ("a2c", "ppo")},
        "median_early_mean50": {a: med(a, "early_mean50") for a in ("a2c", "ppo")},
        "seeds_beating_baseline": {a: sum(s.beats_baseline for s in summaries if s.algorithm == a)
                                   for a in ("a2c", "ppo")},
    }
    report["ppo_converges_faster"] = report["median_plateau_episode"]["ppo"] < report["median_plateau_episode"]["a2c"]
    report["ppo_more_stable"] = report["median_last100_std"]["ppo"] < report["median_last100_std"]["a2c"]
    report["a2c_better_early"] = report["median_early_mean50"]["a2c"] > report["median_early_mean50"]["ppo"]

    if write:
        out_root.mkdir(parents=True, exist_ok=True)
        with (out_root / "compare_curves.csv").open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(curves[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(curves)
        with (out_root / "compare_report.csv").open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(report["runs"][0]), lineterminator="\n")
            w.writeheader()
            w.writerows(report["runs"])
        (out_root / "compare_report.json").write_text(json.dumps(report, indent=2))
    # in-memory extras, not written: episode curves and per-slot rewards keyed by (algorithm, seed)
    report["curves"] = curves
    report["slot_rewards"] = {(algo, seed): rewards for algo, seed, _, rewards in results}
    return report
