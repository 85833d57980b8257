"""Per-UE allocation history and the connectivity/rate/fairness reward."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RewardConfig:
    full_reward: float = 1.0
    failure_penalty: float = -1.0
    window: int = 100


@dataclass
class FairnessLedger:
    """Sliding-window RGB counts per UE.

    ``history`` keeps one grant vector per slot, oldest first; ``counts`` is
    their running sum.
    """

    n_ues: int
    window: int = 100
    counts: np.ndarray = field(init=False)
    history: deque = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_ues < 1:
            raise ValueError("ledger needs at least one UE")
        if self.window < 1:
            raise ValueError("ledger window must be >= 1 slot")
        self.counts = np.zeros(self.n_ues, dtype=np.int64)
        self.history = deque()

    def copy(self) -> "FairnessLedger":
        other = FairnessLedger(self.n_ues, self.window)
        other.counts = self.counts.copy()
        other.history = deque(h.copy() for h in self.history)
        return other


def update_ledger(ledger: FairnessLedger, action) -> FairnessLedger:
    """Record one slot of grants and evict slots older than the window.

    ``action`` is anything exposing ``grants`` as (bs_id, ue_id, rgb_share)
    triples.  Mutates and returns ``ledger``.
    """
    slot = np.zeros(ledger.n_ues, dtype=np.int64)
    for _, ue, share in action.grants:
        if not 0 <= ue < ledger.n_ues:
            raise ValueError(f"unknown UE id {ue} (ledger tracks {ledger.n_ues} UEs)")
        slot[ue] += share
    ledger.history.append(slot)
    ledger.counts += slot
    while len(ledger.history) > ledger.window:
        ledger.counts -= ledger.history.popleft()
    return ledger


def fairness_ratio(ledger_or_counts) -> float:
    """min/max of the windowed counts; 1.0 when nothing has been granted."""
    counts = _counts(ledger_or_counts)
    hi = counts.max()
    if hi == 0:
        return 1.0
    return float(counts.min() / hi)


def fairness_shares(ledger_or_counts) -> np.ndarray:
    counts = _counts(ledger_or_counts)
    hi = counts.max()
    if hi == 0:
        return np.ones(len(counts))
    return counts / hi


def _counts(x) -> np.ndarray:
    return x.counts if isinstance(x, FairnessLedger) else np.asarray(x)


def reward(rates, demands, connected, fairness: float, cfg: RewardConfig = RewardConfig()) -> float:
    """Slot reward.

    full_reward * (C / n_ues) * mean(rate / demand over connected UEs) * fairness,
    or ``failure_penalty`` when no UE is connected.
    """
    connected = np.asarray(connected, dtype=bool)
    n = connected.size
    c = int(connected.sum())
    if c == 0:
        return float(cfg.failure_penalty)
    utility = np.asarray(rates)[connected] / np.asarray(demands)[connected]
    return float(cfg.full_reward * (c / n) * utility.mean() * fairness)
