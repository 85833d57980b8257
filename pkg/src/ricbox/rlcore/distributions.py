"""Categorical policy head over logits."""

from __future__ import annotations

import numpy as np

from ricbox.errors import ContractError, NumericError


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def softmax_sample(logits: np.ndarray, rng: np.random.Generator) -> tuple[int, float]:
    """Sample by inverse CDF on one uniform draw; returns (action, log prob)."""
    logits = np.asarray(logits, dtype=np.float64)
    if not np.isfinite(logits).all():
        raise NumericError("non-finite logits")
    logp = log_softmax(logits)
    cdf = np.cumsum(np.exp(logp))
    a = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    a = min(a, len(cdf) - 1)
    return a, float(logp[a])


def log_prob_and_entropy(logits: np.ndarray, action: int) -> tuple[float, float]:
    logits = np.asarray(logits, dtype=np.float64)
    k = logits.shape[-1]
    if not 0 <= action < k:
        raise ContractError(f"action {action} outside [0, {k})")
    logp = log_softmax(logits)
    p = np.exp(logp)
    return float(logp[action]), float(-(p * logp).sum())


def batch_stats(logits: np.ndarray, actions: np.ndarray):
    """Per-row log pi(a), entropy, probabilities and log-probabilities for a batch."""
    logp_all = log_softmax(logits)
    p = np.exp(logp_all)
    rows = np.arange(len(actions))
    logp = logp_all[rows, actions]
    ent = -(p * logp_all).sum(axis=1)
    return logp, ent, p, logp_all


def dlogp_dlogits(p: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """Row-wise gradient of log pi(a | logits): onehot(a) - p."""
    g = -p.copy()
    g[np.arange(len(actions)), actions] += 1.0
    return g


def dentropy_dlogits(p: np.ndarray, logp_all: np.ndarray) -> np.ndarray:
    ent = -(p * logp_all).sum(axis=1, keepdims=True)
    return -p * (logp_all + ent)


def greedy_action(logits: np.ndarray) -> int:
    """argmax with ties going to the lowest index."""
    return int(np.argmax(np.asarray(logits)))
