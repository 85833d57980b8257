from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from ricbox.errors import ContractError, NumericError
from ricbox.rlcore.distributions import greedy_action as _argmax
from ricbox.rlcore.distributions import softmax_sample
from ricbox.rlcore.mlp import MlpParams, predict


@dataclass(frozen=True)
class StepResult:
    obs: np.ndarray
    reward: float
    done: bool
    connected: int
    sum_rate: float
    fairness: float


class SlotEnv(Protocol):
    """What the trainers need from an environment (direct or bus-mediated)."""

    n_actions: int
    obs_dim: int
    obs: np.ndarray

    def reset(self, seed: int) -> np.ndarray: ...

    def step(self, action: int) -> StepResult: ...


@dataclass
class Trajectory:
    obs: list = field(default_factory=list)
    actions: list = field(default_factory=list)
    log_probs: list = field(default_factory=list)
    rewards: list = field(default_factory=list)
    values: list = field(default_factory=list)
    dones: list = field(default_factory=list)
    # per-step env metrics, kept for logging only
    sum_rates: list = field(default_factory=list)
    fairness: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.actions)

    def append(self, obs, action, log_prob, value, res: StepResult) -> None:
        if not np.isfinite(log_prob):
            raise NumericError(f"non-finite log-prob at step {len(self)}")
        self.obs.append(obs)
        self.actions.append(action)
        self.log_probs.append(log_prob)
        self.values.append(value)
        self.rewards.append(res.reward)
        self.dones.append(res.done)
        self.sum_rates.append(res.sum_rate)
        self.fairness.append(res.fairness)


def discounted_returns(rewards, gamma: float) -> np.ndarray:
    """G_t = r_t + gamma * G_{t+1}, with G_{T-1} = r_{T-1}."""
    if not 0.0 < gamma <= 1.0:
        raise ContractError(f"gamma {gamma} outside (0, 1]")
    r = np.asarray(rewards, dtype=np.float64)
    out = np.empty_like(r)
    acc = 0.0
    for t in range(len(r) - 1, -1, -1):
        acc = r[t] + gamma * acc
        out[t] = acc
    return out


def episode_returns(rewards, dones, gamma: float) -> np.ndarray:
    """discounted_returns restarted after every done flag."""
    r = np.asarray(rewards, dtype=np.float64)
    out = np.empty_like(r)
    acc = 0.0
    for t in range(len(r) - 1, -1, -1):
        if dones[t]:
            acc = 0.0
        acc = r[t] + gamma * acc
        out[t] = acc
    return out


def advantages(returns, values, normalize: bool = True) -> np.ndarray:
    g = np.asarray(returns, dtype=np.float64)
    v = np.asarray(values, dtype=np.float64)
    if g.shape != v.shape:
        raise ContractError(f"returns length {g.size} != values length {v.size}")
    adv = g - v
    if not normalize or adv.size == 0:
        return adv
    adv = adv - adv.mean()
    std = adv.std()
    if std > 1e-12:
        adv = adv / std
    return adv


class RolloutBuffer:
    """The on-policy set D_k.  ``consume()`` may be called once."""

    def __init__(self, trajectories: list[Trajectory]):
        if not trajectories or any(len(t) == 0 for t in trajectories):
            raise ContractError("rollout buffer needs non-empty trajectories")
        self.trajectories = trajectories
        self.obs = np.array([o for t in trajectories for o in t.obs], dtype=np.float64)
        self.actions = np.array([a for t in trajectories for a in t.actions], dtype=np.int64)
        self.log_probs = np.array([x for t in trajectories for x in t.log_probs])
        self.rewards = np.array([x for t in trajectories for x in t.rewards])
        self.values = np.array([x for t in trajectories for x in t.values])
        self.returns: np.ndarray | None = None
        self.advantages: np.ndarray | None = None
        self.consumed = False

    def __len__(self) -> int:
        return len(self.actions)

    def compute(self, gamma: float, normalize: bool = True) -> "RolloutBuffer":
        self.returns = np.concatenate([discounted_returns(t.rewards, gamma) for t in self.trajectories])
        self.advantages = advantages(self.returns, self.values, normalize)
        return self

    def require_ready(self) -> None:
        if self.consumed:
            raise ContractError("rollout buffer already consumed (on-policy data is single-use)")
        if self.returns is None or self.advantages is None:
            raise ContractError("returns/advantages not computed before update")

    def mark_consumed(self) -> None:
        self.consumed = True
        self.obs = self.obs[:0]


def collect_rollout(env: SlotEnv, actor: MlpParams, critic: MlpParams, steps: int,
                    rng: np.random.Generator) -> Trajectory:
    """Run the stochastic policy for ``steps`` slots or until the episode ends."""
    if steps < 1:
        raise ContractError("steps must be >= 1")
    traj = Trajectory()
    obs = env.obs
    for _ in range(steps):
        logits = predict(actor, obs)
        a, logp = softmax_sample(logits, rng)
        v = float(predict(critic, obs)[0])
        res = env.step(a)
        traj.append(obs, a, logp, v, res)
        obs = res.obs
        if res.done:
            break
    return traj


def greedy_action(actor: MlpParams, observation) -> int:
    return _argmax(predict(actor, observation))


def run_greedy_episode(env: SlotEnv, actor: MlpParams, seed: int, steps: int) -> Trajectory:
    traj = Trajectory()
    obs = env.reset(seed)
    for _ in range(steps):
        a = greedy_action(actor, obs)
        res = env.step(a)
        traj.append(obs, a, 0.0, 0.0, res)
        obs = res.obs
        if res.done:
            break
    return traj


def run_random_episode(env: SlotEnv, seed: int, steps: int, rng: np.random.Generator) -> Trajectory:
    traj = Trajectory()
    obs = env.reset(seed)
    for _ in range(steps):
        a = int(rng.integers(env.n_actions))
        res = env.step(a)
        traj.append(obs, a, -np.log(env.n_actions), 0.0, res)
        obs = res.obs
        if res.done:
            break
    return traj
