"""Network checkpoint file.

Little-endian layout:

    b"RLCK"            magic
    u32                version (1)
    u32                layer count L
    L times:
        u32 rows, u32 cols
        rows*cols f64  weights, row-major (rows = layer input dim)
        cols f64       biases
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ricbox.errors import CheckpointError
from ricbox.rlcore.mlp import MlpParams

MAGIC = b"RLCK"
VERSION = 1


def dumps(params: MlpParams) -> bytes:
    parts = [MAGIC, struct.pack("<II", VERSION, params.n_layers)]
    for w, b in zip(params.weights, params.biases):
        rows, cols = w.shape
        parts.append(struct.pack("<II", rows, cols))
        parts.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return b"".join(parts)


def loads(data: bytes) -> MlpParams:
    mv = memoryview(data)
    if bytes(mv[:4]) != MAGIC:
        raise CheckpointError("bad checkpoint magic")
    if len(mv) < 12:
        raise CheckpointError("truncated checkpoint header")
    version, n = struct.unpack_from("<II", mv, 4)
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    off = 12
    weights, biases = [], []
    for k in range(n):
        if off + 8 > len(mv):
            raise CheckpointError(f"truncated at layer {k} header")
        rows, cols = struct.unpack_from("<II", mv, off)
        off += 8
        need = 8 * (rows * cols + cols)
        if off + need > len(mv):
            raise CheckpointError(f"truncated in layer {k} data")
        w = np.frombuffer(mv, dtype="<f8", count=rows * cols, offset=off).reshape(rows, cols).astype(np.float64)
        off += 8 * rows * cols
        b = np.frombuffer(mv, dtype="<f8", count=cols, offset=off).astype(np.float64)
        off += 8 * cols
        if weights and weights[-1].shape[1] != rows:
            raise CheckpointError(f"layer {k} input dim {rows} does not chain with previous output")
        weights.append(w)
        biases.append(b)
    if off != len(mv):
        raise CheckpointError(f"{len(mv) - off} trailing bytes after last layer")
    return MlpParams(weights, biases)


def save_checkpoint(path, params: MlpParams) -> Path:
    path = Path(path)
    path.write_bytes(dumps(params))
    return path


def load_checkpoint(path) -> MlpParams:
    return loads(Path(path).read_bytes())
