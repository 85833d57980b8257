"""Dense tanh MLP with a linear head and hand-written reverse mode.

Weights are stored (in_dim, out_dim) so a batch ``x`` of shape (B, in_dim)
maps through ``x @ W + b``.  Everything is float64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ricbox.errors import ContractError


@dataclass
class MlpParams:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def out_dim(self) -> int:
        return self.weights[-1].shape[1]

    def arrays(self) -> list[np.ndarray]:
        """Weights and biases interleaved: W0, b0, W1, b1, ..."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def copy(self):
        return type(self)([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def zeros_like(self) -> "Gradients":
        return Gradients([np.zeros_like(w) for w in self.weights], [np.zeros_like(b) for b in self.biases])

    def shape_signature(self) -> tuple:
        return tuple(w.shape for w in self.weights)

    def allclose(self, other: "MlpParams", **kw) -> bool:
        return self.shape_signature() == other.shape_signature() and all(
            np.allclose(a, b, **kw) for a, b in zip(self.arrays(), other.arrays())
        )

    def array_equal(self, other: "MlpParams") -> bool:
        return self.shape_signature() == other.shape_signature() and all(
            np.array_equal(a, b) for a, b in zip(self.arrays(), other.arrays())
        )


class Gradients(MlpParams):
    """Same layout as MlpParams; holds d(loss)/d(param)."""

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(a * a)) for a in self.arrays())))

    def scale(self, factor: float) -> "Gradients":
        for a in self.arrays():
            a *= factor
        return self

    def add(self, other: "Gradients") -> "Gradients":
        for a, b in zip(self.arrays(), other.arrays()):
            a += b
        return self


def init_mlp(sizes, rng: np.random.Generator, out_scale: float = 1.0) -> MlpParams:
    """Glorot-uniform weights, zero biases; the last layer is scaled by ``out_scale``.

    A small ``out_scale`` (0.01 for the actor) starts the policy near uniform.
    """
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) < 2 or min(sizes) < 1:
        raise ContractError(f"bad layer sizes {sizes}")
    weights, biases = [], []
    for k, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        if k == len(sizes) - 2:
            w *= out_scale
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return MlpParams(weights, biases)


def mlp_sizes(in_dim: int, hidden_layers: int, hidden_width: int, out_dim: int) -> tuple[int, ...]:
    return (in_dim,) + (hidden_width,) * hidden_layers + (out_dim,)


@dataclass
class ForwardCache:
    signature: tuple
    inputs: list[np.ndarray]  # input to each layer
    hidden: list[np.ndarray]  # tanh outputs of hidden layers


def forward(params: MlpParams, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != params.in_dim:
        raise ContractError(f"input shape {x.shape} does not match network input dim {params.in_dim}")
    inputs, hidden = [], []
    h = x
    last = params.n_layers - 1
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        inputs.append(h)
        z = h @ w + b
        if k < last:
            h = np.tanh(z)
            hidden.append(h)
        else:
            h = z
    return h, ForwardCache(params.shape_signature(), inputs, hidden)


def predict(params: MlpParams, x: np.ndarray) -> np.ndarray:
    """Forward pass without keeping activations; 1-D input gives 1-D output."""
    h = np.asarray(x, dtype=np.float64)
    last = params.n_layers - 1
    for k, (w, b) in enumerate(zip(params.weights, params.biases)):
        h = h @ w + b
        if k < last:
            h = np.tanh(h)
    return h


def backward(params: MlpParams, cache: ForwardCache, output_grad: np.ndarray) -> Gradients:
    if cache.signature != params.shape_signature():
        raise ContractError("forward cache was produced by a network of a different shape")
    g = np.asarray(output_grad, dtype=np.float64)
    if g.ndim == 1:
        g = g[None, :]
    batch = cache.inputs[0].shape[0]
    if g.shape != (batch, params.out_dim):
        raise ContractError(f"output_grad shape {g.shape}, expected {(batch, params.out_dim)}")
    n = params.n_layers
    gw: list[np.ndarray] = [None] * n  # type: ignore[list-item]
    gb: list[np.ndarray] = [None] * n  # type: ignore[list-item]
    for k in range(n - 1, -1, -1):
        gw[k] = cache.inputs[k].T @ g
        gb[k] = g.sum(axis=0)
        if k > 0:
            h = cache.hidden[k - 1]
            g = (g @ params.weights[k].T) * (1.0 - h * h)
    return Gradients(gw, gb)
