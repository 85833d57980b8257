from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ricbox.rlcore.mlp import Gradients, MlpParams

LossFn = Callable[[MlpParams], tuple[float, Gradients]]


@dataclass(frozen=True)
class GradCheckReport:
    max_rel_error: float
    n_checked: int
    tolerance: float
    worst: tuple[int, tuple[int, ...]] | None  # (array index in params.arrays(), element index)

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance


def rel_error(analytic: float, numeric: float, floor: float = 1e-6) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def grad_check(params: MlpParams, loss_fn: LossFn, tolerance: float = 1e-4, *, h: float = 1e-5,
               n_samples: int | None = 64, rng: np.random.Generator | None = None,
               floor: float = 1e-6) -> GradCheckReport:
    """Compare ``loss_fn``'s analytic gradient with central differences.

    ``n_samples`` entries are drawn uniformly from all parameters (None checks
    every entry).  Relative error uses a floor of ``floor`` on the denominator so
    entries that are numerically zero on both sides do not dominate.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    work = params.copy()
    _, analytic = loss_fn(work)
    arrays = work.arrays()
    garrays = analytic.arrays()
    sizes = np.array([a.size for a in arrays])
    total = int(sizes.sum())
    if n_samples is None or n_samples >= total:
        flat = np.arange(total)
    else:
        flat = rng.choice(total, size=n_samples, replace=False)
    offsets = np.concatenate([[0], np.cumsum(sizes)])

    worst_err, worst = 0.0, None
    for f in flat:
        ai = int(np.searchsorted(offsets, f, side="right") - 1)
        idx = np.unravel_index(int(f - offsets[ai]), arrays[ai].shape)
        a = arrays[ai]
        orig = a[idx]
        a[idx] = orig + h
        lp, _ = loss_fn(work)
        a[idx] = orig - h
        lm, _ = loss_fn(work)
        a[idx] = orig
        numeric = (lp - lm) / (2.0 * h)
        err = rel_error(float(garrays[ai][idx]), numeric, floor)
        if err > worst_err or worst is None:
            worst_err, worst = err, (ai, tuple(int(i) for i in idx))
    return GradCheckReport(worst_err, len(flat), tolerance, worst)


def sweep_random_networks(n_networks: int = 100, seed: int = 0, tolerance: float = 1e-4, *, h: float = 1e-5,
                          max_depth: int = 3, max_width: int = 6) -> list[GradCheckReport]:
    """Check backprop on ``n_networks`` random MLP shapes under a squared-error loss.

    Every parameter entry is checked.  Inputs, targets and biases are random so
    that no entry is trivially zero.
    """
    from ricbox.rlcore.mlp import backward, forward, init_mlp

    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(n_networks):
        depth = int(rng.integers(1, max_depth + 1))
        sizes = [int(rng.integers(1, max_width + 1)) for _ in range(depth + 1)]
        params = init_mlp(sizes, rng)
        for b in params.biases:
            b[:] = rng.normal(0.0, 0.3, b.shape)
        batch = int(rng.integers(1, 5))
        x = rng.normal(size=(batch, sizes[0]))
        y = rng.normal(size=(batch, sizes[-1]))

        def loss(p, x=x, y=y):
            out, cache = forward(p, x)
            diff = out - y
            return 0.5 * float(np.sum(diff * diff)), backward(p, cache, diff)

        reports.append(grad_check(params, loss, tolerance, h=h, n_samples=None, rng=rng))
    return reports
