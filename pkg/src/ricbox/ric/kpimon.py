"""KPI collection: one indication per slot from the RAN node.

Record order (subject in brackets):
    per UE, by id:   DL_RATE_MBPS [ue], CQI [ue]   (CQI = best over BSs)
    per BS, by id:   USED_PRBS [bs], AVAIL_PRBS [bs]
    cell-wide:       CONNECTED_UES [node], FAIRNESS [node]
"""

from __future__ import annotations

from ricbox.env.network import NetworkState, StepMetrics
from ricbox.ric.store import TimeSeriesStore
from ricbox.ric.wire import IndicationMessage, Kpi, KpiRecord


def kpimon_collect(state: NetworkState, metrics: StepMetrics, node_id: int, slot: int) -> IndicationMessage:
    best = state.best_cqi()
    records = []
    for ue in range(state.n_ues):
        records.append(KpiRecord(Kpi.DL_RATE_MBPS, ue, float(state.per_ue_rate[ue])))
        records.append(KpiRecord(Kpi.CQI, ue, float(best[ue])))
    for bs in state.bss:
        used = int(state.per_bs_used_rgbs[bs.id])
        records.append(KpiRecord(Kpi.USED_PRBS, bs.id, float(used)))
        records.append(KpiRecord(Kpi.AVAIL_PRBS, bs.id, float(bs.rgb_count - used)))
    records.append(KpiRecord(Kpi.CONNECTED_UES, node_id, float(metrics.connected_count)))
    records.append(KpiRecord(Kpi.FAIRNESS, node_id, float(metrics.fairness_ratio)))
    return IndicationMessage(node_id, slot, tuple(records))


class KpiMon:
    """Stamps indications with a monotone slot counter and writes them to the store."""

    def __init__(self, node_id: int, store: TimeSeriesStore | None = None):
        self.node_id = node_id
        self.store = store
        self.next_slot = 0

    def collect(self, state: NetworkState, metrics: StepMetrics) -> IndicationMessage:
        msg = kpimon_collect(state, metrics, self.node_id, self.next_slot)
        self.next_slot += 1
        if self.store is not None:
            self.store.write_indication(msg)
        return msg
