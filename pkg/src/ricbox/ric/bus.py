"""In-process E2 path between one RAN node and one xApp.

Each direction is a one-message pipe carrying encoded bytes, so every slot
round-trips through the wire codec exactly once per direction.
"""

from __future__ import annotations

import numpy as np

from ricbox.agents.direct import safe_step
from ricbox.agents.rollout import StepResult
from ricbox.env.network import AllocationAction, RanEnv, StepMetrics
from ricbox.fairness import fairness_ratio
from ricbox.ric.kpimon import KpiMon
from ricbox.ric.store import TimeSeriesStore
from ricbox.ric.wire import ControlMessage, IndicationMessage, decode, encode
from ricbox.ric.xapp import KpiView, NodeRegistration, XApp


class PipeError(RuntimeError):
    pass


class Pipe:
    """Single-slot hand-off; a second put before a get is a protocol error."""

    def __init__(self, name: str):
        self.name = name
        self._item: bytes | None = None
        self.count = 0

    def put(self, data: bytes) -> None:
        if self._item is not None:
            raise PipeError(f"{self.name}: message already in flight")
        self._item = data
        self.count += 1

    def get(self) -> bytes:
        if self._item is None:
            raise PipeError(f"{self.name}: nothing to receive")
        data, self._item = self._item, None
        return data


class E2Node:
    """RAN side: runs the simulator, reports KPIs, applies control messages."""

    def __init__(self, env: RanEnv, node_id: int = 0, store: TimeSeriesStore | None = None):
        self.env = env
        self.node_id = node_id
        self.kpimon = KpiMon(node_id, store)
        # called as observer(state, metrics) after every slot
        self.observer = None

    def registration(self) -> NodeRegistration:
        sc = self.env.scenario
        return NodeRegistration(self.node_id, sc.n_ues, sc.n_bss, sc.rgb_count, (float(sc.demand_mbps),) * sc.n_ues)

    def reset(self, seed: int) -> IndicationMessage:
        state = self.env.reset(seed)
        m = StepMetrics(0, 0.0, fairness_ratio(self.env.ledger), 0.0)
        return self.kpimon.collect(state, m)

    def apply(self, ctrl: ControlMessage) -> IndicationMessage:
        if ctrl.target_node_id != self.node_id:
            raise PipeError(f"control for node {ctrl.target_node_id} delivered to node {self.node_id}")
        state, m = safe_step(self.env, AllocationAction(tuple(ctrl.allocation)))
        if self.observer is not None:
            self.observer(state, m)
        return self.kpimon.collect(state, m)


class BusEnv:
    """SlotEnv whose every observation and action crosses the wire codec."""

    def __init__(self, env: RanEnv, slots_per_episode: int, node_id: int = 0,
                 store: TimeSeriesStore | None = None):
        self.node = E2Node(env, node_id, store)
        self.xapp = XApp(self.node.registration(), env.reward_cfg)
        self.uplink = Pipe("uplink")
        self.downlink = Pipe("downlink")
        self.slots = slots_per_episode
        self.n_actions = self.xapp.codec.n_actions
        self.obs_dim = 4 * env.n_ues
        self.obs: np.ndarray | None = None
        self.view: KpiView | None = None
        self._t = 0

    @property
    def observer(self):
        return self.node.observer

    @observer.setter
    def observer(self, fn):
        self.node.observer = fn

    def _receive(self) -> KpiView:
        self.view = self.xapp.ingest(decode(self.uplink.get()))
        self.obs = self.view.obs
        return self.view

    def reset(self, seed: int) -> np.ndarray:
        self.uplink.put(encode(self.node.reset(seed)))
        self.xapp.reset()
        self._t = 0
        return self._receive().obs

    def step(self, action: int) -> StepResult:
        self.downlink.put(encode(self.xapp.control(action, self.view.slot)))
        self.uplink.put(encode(self.node.apply(decode(self.downlink.get()))))
        v = self._receive()
        self._t += 1
        return StepResult(v.obs, v.reward, self._t >= self.slots, v.connected, v.sum_rate, v.fairness)
