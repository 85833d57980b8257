"""In-process env <-> agent coupling without the E2 message path."""

from __future__ import annotations

import numpy as np

from ricbox.agents.codec import ActionCodec
from ricbox.agents.rollout import StepResult
from ricbox.env.network import AllocationAction, RanEnv
from ricbox.errors import ActionError


def safe_step(env: RanEnv, action: AllocationAction):
    """Apply ``action``; an invalid one becomes a penalised no-op slot."""
    try:
        return env.step(action)
    except ActionError:
        state, m = env.step(AllocationAction.empty())
        return state, type(m)(m.connected_count, m.sum_rate, m.fairness_ratio, env.reward_cfg.failure_penalty)


class DirectEnv:
    def __init__(self, env: RanEnv, slots_per_episode: int, codec: ActionCodec | None = None):
        self.env = env
        self.slots = slots_per_episode
        self.codec = codec or ActionCodec(env.n_ues, env.n_bss, env.scenario.rgb_count)
        self.n_actions = self.codec.n_actions
        self.obs_dim = 4 * env.n_ues
        self.obs: np.ndarray | None = None
        # called as observer(state, metrics) after every slot
        self.observer = None

    def reset(self, seed: int) -> np.ndarray:
        self.env.reset(seed)
        self.obs = self.env.observe()
        return self.obs

    def step(self, action: int) -> StepResult:
        state, m = safe_step(self.env, self.codec.decode(action))
        if self.observer is not None:
            self.observer(state, m)
        self.obs = self.env.observe()
        return StepResult(self.obs, m.reward, state.timeslot >= self.slots, m.connected_count, m.sum_rate,
                          m.fairness_ratio)
