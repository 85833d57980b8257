"""Advantage actor-critic over full-episode rollouts.

Actor loss  L_a = -mean_t[ log pi(a_t|s_t) * A_t ] - c_ent * mean_t[ H(pi(.|s_t)) ]
Critic loss L_c = mean_t[ (G_t - V(s_t))^2 ]

A_t = G_t - V(s_t) is treated as a constant in L_a (no gradient into the critic).
The mean rather than the sum over t keeps the gradient scale independent of
episode length; under Adam this is otherwise equivalent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ricbox.agents.common import ActorCritic, LossReport, _finite, policy_terms
from ricbox.agents.rollout import RolloutBuffer
from ricbox.errors import ConfigError
from ricbox.rlcore.distributions import dentropy_dlogits, dlogp_dlogits
from ricbox.rlcore.mlp import backward, forward
from ricbox.rlcore.optim import adam_step, clip_grad_norm


@dataclass(frozen=True)
class A2cConfig:
    gamma: float = 0.9
    entropy_coef: float = 0.01
    normalize_advantages: bool = True

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("agent.gamma", "must be in (0, 1]")


def a2c_actor_loss(log_probs, advantages, entropies, entropy_coef: float = 0.0) -> float:
    log_probs = np.asarray(log_probs, dtype=np.float64)
    return float(-np.mean(log_probs * np.asarray(advantages)) - entropy_coef * np.mean(entropies))


def a2c_losses_and_grads(buffer: RolloutBuffer, nets: ActorCritic, cfg: A2cConfig):
    """Losses and raw gradients of both networks on ``buffer``, without updating."""
    obs, actions, adv, ret = buffer.obs, buffer.actions, buffer.advantages, buffer.returns
    n = len(actions)
    _, cache, logp, ent, p, logp_all = policy_terms(nets.actor, obs, actions)
    la = _finite("actor loss", a2c_actor_loss(logp, adv, ent, cfg.entropy_coef))
    glogits = -(adv / n)[:, None] * dlogp_dlogits(p, actions) - (cfg.entropy_coef / n) * dentropy_dlogits(p, logp_all)
    ga = backward(nets.actor, cache, glogits)

    v, vcache = forward(nets.critic, obs)
    diff = v[:, 0] - ret
    lc = _finite("critic loss", float(np.mean(diff * diff)))
    gc = backward(nets.critic, vcache, (2.0 / n * diff)[:, None])
    return LossReport(la, lc, float(ent.mean())), ga, gc


def a2c_update(buffer: RolloutBuffer, nets: ActorCritic, cfg: A2cConfig = A2cConfig()) -> LossReport:
    """One gradient step on each network; the buffer is consumed on success."""
    buffer.require_ready()
    report, ga, gc = a2c_losses_and_grads(buffer, nets, cfg)
    clip_grad_norm(ga, nets.max_grad_norm)
    clip_grad_norm(gc, nets.max_grad_norm)
    adam_step(nets.actor, ga, nets.actor_opt)
    adam_step(nets.critic, gc, nets.critic_opt)
    buffer.mark_consumed()
    return report
