"""PPO with the clipped surrogate and a separately fitted value function."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ricbox.agents.common import ActorCritic, LossReport, _finite, policy_terms
from ricbox.agents.rollout import RolloutBuffer
from ricbox.errors import ConfigError, NumericError
from ricbox.rlcore.distributions import dentropy_dlogits, dlogp_dlogits
from ricbox.rlcore.mlp import backward, forward
from ricbox.rlcore.optim import adam_step, clip_grad_norm


@dataclass(frozen=True)
class PpoConfig:
    gamma: float = 0.9
    clip_eps: float = 0.2
    epochs: int = 4
    minibatch_size: int = 50
    entropy_coef: float = 0.01
    value_coef: float = 1.0
    normalize_advantages: bool = True

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("agent.gamma", "must be in (0, 1]")
        if not 0.0 < self.clip_eps < 1.0:
            raise ConfigError("agent.ppo.clip_eps", "must be in (0, 1)")
        if self.epochs < 1:
            raise ConfigError("agent.ppo.epochs", "must be >= 1")
        if self.minibatch_size < 1:
            raise ConfigError("agent.ppo.minibatch_size", "must be >= 1")


def clipped_surrogate(ratio, adv, eps: float) -> np.ndarray:
    """min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A), elementwise."""
    ratio = np.asarray(ratio, dtype=np.float64)
    adv = np.asarray(adv, dtype=np.float64)
    return np.minimum(ratio * adv, np.clip(ratio, 1.0 - eps, 1.0 + eps) * adv)


def surrogate_grad_weight(ratio, adv, eps: float) -> np.ndarray:
    """d surrogate / d log pi: ratio * A where the unclipped branch is selected, else 0."""
    unclipped = ratio * adv
    active = unclipped <= np.clip(ratio, 1.0 - eps, 1.0 + eps) * adv
    return np.where(active, unclipped, 0.0)


def ppo_minibatch(nets: ActorCritic, obs, actions, old_logp, adv, ret, cfg: PpoConfig, index=None):
    """Losses and gradients on one minibatch; ``index`` maps rows back to buffer steps for errors."""
    m = len(actions)
    _, cache, logp, ent, p, logp_all = policy_terms(nets.actor, obs, actions)
    ratio = np.exp(logp - old_logp)
    bad = np.flatnonzero(~np.isfinite(ratio))
    if bad.size:
        step = int(bad[0] if index is None else index[bad[0]])
        raise NumericError(f"non-finite probability ratio at step {step}")
    surr = clipped_surrogate(ratio, adv, cfg.clip_eps)
    la = _finite("actor loss", float(-surr.mean() - cfg.entropy_coef * ent.mean()))
    w = surrogate_grad_weight(ratio, adv, cfg.clip_eps)
    glogits = -(w / m)[:, None] * dlogp_dlogits(p, actions) - (cfg.entropy_coef / m) * dentropy_dlogits(p, logp_all)
    ga = backward(nets.actor, cache, glogits)

    v, vcache = forward(nets.critic, obs)
    diff = v[:, 0] - ret
    lc = _finite("critic loss", cfg.value_coef * float(np.mean(diff * diff)))
    gc = backward(nets.critic, vcache, (2.0 * cfg.value_coef / m * diff)[:, None])
    return LossReport(la, lc, float(ent.mean())), ga, gc


def ppo_update(buffer: RolloutBuffer, nets: ActorCritic, cfg: PpoConfig, rng: np.random.Generator) -> LossReport:
    """``epochs`` passes of shuffled minibatch Adam steps; returns losses averaged over minibatches."""
    buffer.require_ready()
    n = len(buffer)
    obs, actions, old = buffer.obs, buffer.actions, buffer.log_probs
    adv, ret = buffer.advantages, buffer.returns
    size = cfg.minibatch_size
    batches = (perm[i:i + size] for _ in range(cfg.epochs) for perm in [rng.permutation(n)] for i in range(0, n, size))
    reports = []
    for mb in batches:
        rep, ga, gc = ppo_minibatch(nets, obs[mb], actions[mb], old[mb], adv[mb], ret[mb], cfg, mb)
        clip_grad_norm(ga, nets.max_grad_norm)
        clip_grad_norm(gc, nets.max_grad_norm)
        adam_step(nets.actor, ga, nets.actor_opt)
        adam_step(nets.critic, gc, nets.critic_opt)
        reports.append(rep)
    buffer.mark_consumed()
    return LossReport(
        float(np.mean([r.actor_loss for r in reports])),
        float(np.mean([r.critic_loss for r in reports])),
        float(np.mean([r.entropy for r in reports])),
    )
