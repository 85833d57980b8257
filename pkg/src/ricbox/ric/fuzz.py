"""Random message generation and byte mutation for codec fuzzing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ricbox.ric.wire import (
    KPI_IDS,
    U16_MAX,
    U64_MAX,
    ControlMessage,
    DecodeError,
    IndicationMessage,
    KpiRecord,
    decode,
    encode,
)

_KPIS = sorted(KPI_IDS)


def random_message(rng: np.random.Generator, max_items: int = 16):
    """A valid indication or control message with random fields."""
    node = int(rng.integers(0, U16_MAX + 1))
    slot = (0, U64_MAX)[int(rng.integers(2))] if rng.random() < 0.05 else int(rng.integers(0, U64_MAX, dtype=np.uint64))
    n = int(rng.integers(1, max_items + 1))
    if rng.random() < 0.5:
        values = rng.normal(0, 10.0 ** rng.integers(-3, 6), n)
        values[rng.random(n) < 0.1] = 0.0
        recs = tuple(KpiRecord(int(rng.choice(_KPIS)), int(rng.integers(0, U16_MAX + 1)), float(v)) for v in values)
        return IndicationMessage(node, slot, recs)
    trip = tuple(tuple(int(x) for x in rng.integers(0, U16_MAX + 1, 3)) for _ in range(n - 1))
    return ControlMessage(node, slot, trip)


def mutate(data: bytes, rng: np.random.Generator) -> bytes:
    """Flip, overwrite, insert, delete or truncate bytes."""
    b = bytearray(data)
    for _ in range(int(rng.integers(1, 4))):
        op = int(rng.integers(5))
        pos = int(rng.integers(0, max(len(b), 1)))
        if op == 0 and b:
            b[pos] ^= 1 << int(rng.integers(8))
        elif op == 1 and b:
            b[pos] = int(rng.integers(256))
        elif op == 2:
            b[pos:pos] = bytes(rng.integers(0, 256, int(rng.integers(1, 8)), dtype=np.uint8))
        elif op == 3 and b:
            del b[pos:pos + int(rng.integers(1, 8))]
        else:
            del b[pos:]
    return bytes(b)


@dataclass(frozen=True)
class FuzzReport:
    roundtrips: int
    roundtrip_failures: int
    mutations: int
    rejected: int
    accepted: int
    crashes: int

    @property
    def ok(self) -> bool:
        return self.roundtrip_failures == 0 and self.crashes == 0


def fuzz_codec(count: int, mutations: int | None = None, seed: int = 0) -> FuzzReport:
    """Round-trip ``count`` random messages and decode ``mutations`` mutated encodings.

    A mutated input may decode (if it happens to be valid) or raise DecodeError;
    any other exception counts as a crash.
    """
    rng = np.random.default_rng(seed)
    mutations = count // 10 if mutations is None else mutations
    fails = 0
    pool = []
    for i in range(count):
        msg = random_message(rng)
        data = encode(msg)
        back = decode(data)
        if back != msg or encode(back) != data:
            fails += 1
        if i < mutations:
            pool.append(data)
    rejected = accepted = crashes = 0
    for i in range(mutations):
        bad = mutate(pool[i % len(pool)] if pool else b"", rng)
        try:
            decode(bad)
            accepted += 1
        except DecodeError:
            rejected += 1
        except Exception:  # noqa: BLE001 - anything else is a decoder bug
            crashes += 1
    return FuzzReport(count, fails, mutations, rejected, accepted, crashes)
