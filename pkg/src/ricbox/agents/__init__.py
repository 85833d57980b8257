from ricbox.agents.a2c import A2cConfig, a2c_actor_loss, a2c_update
from ricbox.agents.codec import ActionCodec
from ricbox.agents.common import ActorCritic, LossReport
from ricbox.agents.direct import DirectEnv
from ricbox.agents.ppo import PpoConfig, clipped_surrogate, ppo_update
from ricbox.agents.rollout import (
    RolloutBuffer,
    StepResult,
    Trajectory,
    advantages,
    collect_rollout,
    discounted_returns,
    greedy_action,
)

__all__ = [
    "A2cConfig", "ActionCodec", "ActorCritic", "DirectEnv", "LossReport", "PpoConfig", "RolloutBuffer",
    "StepResult", "Trajectory", "a2c_actor_loss", "a2c_update", "advantages", "clipped_surrogate",
    "collect_rollout", "discounted_returns", "greedy_action", "ppo_update",
]
