from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ricbox.errors import ContractError, NumericError
from ricbox.rlcore.mlp import Gradients, MlpParams


@dataclass
class AdamState:
    m: Gradients
    v: Gradients
    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = field(default=0)

    @classmethod
    def for_params(cls, params: MlpParams, learning_rate: float, **kw) -> "AdamState":
        return cls(params.zeros_like(), params.zeros_like(), learning_rate, **kw)

    def copy(self) -> "AdamState":
        return AdamState(self.m.copy(), self.v.copy(), self.learning_rate, self.beta1, self.beta2, self.eps, self.step)


def check_finite(grads: MlpParams, what: str = "gradient") -> None:
    for k, (w, b) in enumerate(zip(grads.weights, grads.biases)):
        if not (np.isfinite(w).all() and np.isfinite(b).all()):
            raise NumericError(f"non-finite {what} in layer {k}")


def clip_grad_norm(grads: Gradients, max_norm: float | None) -> float:
    """Scale ``grads`` in place so the global L2 norm is at most ``max_norm``; returns the pre-clip norm."""
    norm = grads.global_norm()
    if max_norm is not None and norm > max_norm:
        grads.scale(max_norm / norm)
    return norm


def adam_step(params: MlpParams, grads: Gradients, state: AdamState) -> tuple[MlpParams, AdamState]:
    """Bias-corrected Adam, in place.  Returns the same (params, state) objects."""
    if grads.shape_signature() != params.shape_signature() or state.m.shape_signature() != params.shape_signature():
        raise ContractError("params, grads and optimizer moments must share one shape")
    check_finite(grads)
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t
    lr = state.learning_rate
    for p, g, m, v in zip(params.arrays(), grads.arrays(), state.m.arrays(), state.v.arrays()):
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        p -= lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    check_finite(params, "parameter")
    return params, state
