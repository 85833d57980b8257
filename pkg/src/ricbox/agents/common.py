from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ricbox.errors import NumericError
from ricbox.rlcore.distributions import batch_stats
from ricbox.rlcore.mlp import MlpParams, forward, init_mlp, mlp_sizes
from ricbox.rlcore.optim import AdamState


@dataclass
class ActorCritic:
    """Separate policy and value networks, each with its own Adam state."""

    actor: MlpParams
    critic: MlpParams
    actor_opt: AdamState
    critic_opt: AdamState
    max_grad_norm: float | None = 5.0

    @classmethod
    def create(cls, obs_dim: int, n_actions: int, hidden_layers: int, hidden_width: int,
               actor_lr: float, critic_lr: float, rng: np.random.Generator,
               max_grad_norm: float | None = 5.0) -> "ActorCritic":
        actor = init_mlp(mlp_sizes(obs_dim, hidden_layers, hidden_width, n_actions), rng, out_scale=0.01)
        critic = init_mlp(mlp_sizes(obs_dim, hidden_layers, hidden_width, 1), rng, out_scale=1.0)
        return cls(actor, critic, AdamState.for_params(actor, actor_lr), AdamState.for_params(critic, critic_lr),
                   max_grad_norm)


@dataclass(frozen=True)
class LossReport:
    actor_loss: float
    critic_loss: float
    entropy: float

    @property
    def total(self) -> float:
        return self.actor_loss + self.critic_loss


def _finite(name: str, x: float) -> float:
    if not np.isfinite(x):
        raise NumericError(f"non-finite {name}: {x}")
    return float(x)


def policy_terms(actor: MlpParams, obs: np.ndarray, actions: np.ndarray):
    logits, cache = forward(actor, obs)
    logp, ent, p, logp_all = batch_stats(logits, actions)
    return logits, cache, logp, ent, p, logp_all

