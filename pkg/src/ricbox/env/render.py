"""Scene snapshots for Fig-4 style plots, one JSON object per line.

Record layout, in key order:

    slot       int
    bss        [{"id", "x", "y", "range_m"}]           range_m = CQI>=1 radius
    ues        [{"id", "x", "y", "rate_mbps", "bucket"}]  bucket in good/fair/poor
    edges      [[ue_id, bs_id]]                        serving associations
    metrics    {"connected", "sum_rate_mbps", "fairness", "reward"}
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ricbox.env.channel import ChannelConfig, coverage_radius_m, cqi_thresholds
from ricbox.env.network import NetworkState, StepMetrics


@dataclass(frozen=True)
class SceneDescription:
    slot: int
    bss: tuple
    ues: tuple
    edges: tuple
    metrics: dict

    def to_line(self) -> str:
        d = asdict(self)
        return json.dumps(d, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str) -> "SceneDescription":
        d = json.loads(line)
        return cls(
            slot=d["slot"],
            bss=tuple(d["bss"]),
            ues=tuple(d["ues"]),
            edges=tuple(tuple(e) for e in d["edges"]),
            metrics=d["metrics"],
        )


def rate_bucket(rate: float, demand: float) -> str:
    frac = rate / demand
    if frac >= 0.9:
        return "good"
    if frac >= 0.5:
        return "fair"
    return "poor"


def render(state: NetworkState, metrics: StepMetrics, channel: ChannelConfig = ChannelConfig(),
           slot: int | None = None) -> SceneDescription:
    """``slot`` overrides the state's in-episode timeslot (e.g. a run-global index)."""
    r = coverage_radius_m(channel, float(cqi_thresholds()[0]))
    bss = tuple({"id": b.id, "x": b.position[0], "y": b.position[1], "range_m": r} for b in state.bss)
    ues = tuple(
        {
            "id": i,
            "x": float(state.ue_positions[i, 0]),
            "y": float(state.ue_positions[i, 1]),
            "rate_mbps": float(state.per_ue_rate[i]),
            "bucket": rate_bucket(float(state.per_ue_rate[i]), float(state.demands[i])),
        }
        for i in range(state.n_ues)
    )
    edges = tuple((ue, bs) for ue, bs in enumerate(state.association) if bs is not None)
    m = {
        "connected": metrics.connected_count,
        "sum_rate_mbps": metrics.sum_rate,
        "fairness": metrics.fairness_ratio,
        "reward": metrics.reward,
    }
    return SceneDescription(state.timeslot if slot is None else slot, bss, ues, edges, m)


class SceneLog:
    """Append-only scene writer; slots must arrive in increasing order."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = self.path.open("w")
        self._last = None

    def write(self, scene: SceneDescription) -> None:
        if self._last is not None and scene.slot <= self._last:
            raise ValueError(f"scene slot {scene.slot} not after {self._last}")
        self._last = scene.slot
        self._fh.write(scene.to_line() + "\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_scenes(path) -> list[SceneDescription]:
    with open(path) as fh:
        return [SceneDescription.from_line(line) for line in fh if line.strip()]
