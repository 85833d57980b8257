"""Curve statistics used by the comparison report."""

from __future__ import annotations

import numpy as np


def moving_average(x, window: int = 50) -> np.ndarray:
    """Trailing mean over up to ``window`` points (shorter at the start)."""
    x = np.asarray(x, dtype=np.float64)
    c = np.concatenate([[0.0], np.cumsum(x)])
    idx = np.arange(1, len(x) + 1)
    lo = np.maximum(idx - window, 0)
    return (c[idx] - c[lo]) / (idx - lo)


def final_average(x, window: int = 50) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(x[-window:].mean())


def plateau_episode(x, window: int = 50, fraction: float = 0.9) -> int:
    """First episode whose moving average reaches ``fraction`` of the final-window average.

    For a negative final average the target is final - (1 - fraction) * |final|.
    """
    final = final_average(x, window)
    target = final - (1.0 - fraction) * abs(final)
    ma = moving_average(x, window)
    hits = np.flatnonzero(ma >= target)
    return int(hits[0]) if hits.size else len(ma) - 1


def tail_std(x, window: int = 100) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(x[-window:].std())


def beats_baseline(final: float, baseline: float, margin: float = 0.5) -> bool:
    """final >= baseline + margin * |baseline|, and strictly above the baseline."""
    return final > baseline and final >= baseline + margin * abs(baseline)
