"""The resource-allocation xApp: KPIs in, RGB grants out.

The xApp never sees simulator state.  It rebuilds the observation from the
indication records plus what it learnt at node registration (UE demands),
and keeps its own copy of the fairness ledger from the grants it issued.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ricbox.agents.codec import ActionCodec
from ricbox.env.network import pack_observation
from ricbox.fairness import FairnessLedger, RewardConfig, fairness_shares, reward, update_ledger
from ricbox.ric.wire import ControlMessage, IndicationMessage, Kpi


class DecisionError(ValueError):
    def __init__(self, missing: list[tuple[int, int]]):
        self.missing = missing
        ids = sorted({k for k, _ in missing})
        super().__init__(f"indication lacks required KPI ids {ids} (kpi, subject): {missing}")
        self.missing_ids = ids


@dataclass(frozen=True)
class NodeRegistration:
    """What an E2 node announces at setup; stands in for E2 Setup."""

    node_id: int
    n_ues: int
    n_bss: int
    rgb_count: int
    demands: tuple[float, ...]


@dataclass(frozen=True)
class KpiView:
    slot: int
    obs: np.ndarray
    reward: float
    connected: int
    sum_rate: float
    fairness: float


class XApp:
    def __init__(self, reg: NodeRegistration, reward_cfg: RewardConfig = RewardConfig(),
                 codec: ActionCodec | None = None):
        self.reg = reg
        self.reward_cfg = reward_cfg
        self.codec = codec or ActionCodec(reg.n_ues, reg.n_bss, reg.rgb_count)
        self.demands = np.array(reg.demands, dtype=np.float64)
        self.ledger = FairnessLedger(reg.n_ues, reward_cfg.window)
        self._required = (
            [(int(Kpi.DL_RATE_MBPS), u) for u in range(reg.n_ues)]
            + [(int(Kpi.CQI), u) for u in range(reg.n_ues)]
            + [(int(Kpi.CONNECTED_UES), reg.node_id), (int(Kpi.FAIRNESS), reg.node_id)]
        )

    def reset(self) -> None:
        """Episode boundary (E2 Reset): forget the allocation history."""
        self.ledger = FairnessLedger(self.reg.n_ues, self.reward_cfg.window)

    def ingest(self, ind: IndicationMessage) -> KpiView:
        table = {(r.kpi_id, r.subject_id): r.value for r in ind.records}
        missing = [k for k in self._required if k not in table]
        if missing:
            raise DecisionError(missing)
        n = self.reg.n_ues
        rates = np.array([table[(Kpi.DL_RATE_MBPS, u)] for u in range(n)])
        cqi = np.array([table[(Kpi.CQI, u)] for u in range(n)])
        fair = table[(Kpi.FAIRNESS, self.reg.node_id)]
        obs = pack_observation(rates < self.demands, cqi, rates, self.demands, fairness_shares(self.ledger))
        # a UE is served iff it got a positive rate
        connected = rates > 0
        r = reward(rates, self.demands, connected, fair, self.reward_cfg)
        return KpiView(ind.timestamp_slot, obs, r, int(table[(Kpi.CONNECTED_UES, self.reg.node_id)]),
                       float(rates.sum()), fair)

    def control(self, action_index: int, slot: int) -> ControlMessage:
        action = self.codec.decode(action_index)
        update_ledger(self.ledger, action)
        return ControlMessage(self.reg.node_id, slot, action.grants)

    def decide(self, ind: IndicationMessage, agent: Callable[[np.ndarray], int]) -> ControlMessage:
        view = self.ingest(ind)
        return self.control(int(agent(view.obs)), ind.timestamp_slot)


def xapp_decide(xapp: XApp, indication: IndicationMessage, agent: Callable[[np.ndarray], int]) -> ControlMessage:
    return xapp.decide(indication, agent)
