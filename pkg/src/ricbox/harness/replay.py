"""Tabulate a KPI spill file and turn indications back into scene records."""

from __future__ import annotations

from dataclasses import dataclass

from ricbox.env.render import SceneDescription
from ricbox.ric.wire import IndicationMessage, Kpi, iter_messages

REPLAY_FIELDS = ("offset", "slot", "node", "records", "sum_rate_mbps", "connected", "fairness", "used_prbs", "mean_cqi")


@dataclass(frozen=True)
class ReplayRow:
    offset: int
    slot: int
    node: int
    records: int
    sum_rate_mbps: float
    connected: float
    fairness: float
    used_prbs: float
    mean_cqi: float

    def cells(self) -> list[str]:
        return [repr(v) if isinstance(v, float) else str(v) for v in (getattr(self, f) for f in REPLAY_FIELDS)]


def _by_kind(msg: IndicationMessage) -> dict[int, dict[int, float]]:
    out: dict[int, dict[int, float]] = {}
    for r in msg.records:
        out.setdefault(r.kpi_id, {})[r.subject_id] = r.value
    return out


def summarize_indication(offset: int, msg: IndicationMessage) -> ReplayRow:
    k = _by_kind(msg)
    rates = k.get(Kpi.DL_RATE_MBPS, {})
    cqi = k.get(Kpi.CQI, {})
    nan = float("nan")
    return ReplayRow(
        offset=offset,
        slot=msg.timestamp_slot,
        node=msg.node_id,
        records=len(msg.records),
        # summed in subject order, the same order the xApp sums decoded rates
        sum_rate_mbps=float(sum(rates[u] for u in sorted(rates))),
        connected=k.get(Kpi.CONNECTED_UES, {}).get(msg.node_id, nan),
        fairness=k.get(Kpi.FAIRNESS, {}).get(msg.node_id, nan),
        used_prbs=float(sum(k.get(Kpi.USED_PRBS, {}).values())),
        mean_cqi=float(sum(cqi.values()) / len(cqi)) if cqi else nan,
    )


def replay_rows(data: bytes):
    """Yield one ReplayRow per indication; a DecodeError propagates with its byte offset."""
    for offset, msg in iter_messages(data):
        if isinstance(msg, IndicationMessage):
            yield summarize_indication(offset, msg)


def kpi_scene(msg: IndicationMessage) -> SceneDescription:
    """Scene record rebuilt from KPIs alone.

    Positions are not carried on the wire, so x/y are None.  A UE is linked to
    a BS when exactly one BS used PRBs in the slot and the UE had a positive rate.
    """
    k = _by_kind(msg)
    used = k.get(Kpi.USED_PRBS, {})
    avail = k.get(Kpi.AVAIL_PRBS, {})
    rates = k.get(Kpi.DL_RATE_MBPS, {})
    cqi = k.get(Kpi.CQI, {})
    bss = tuple({"id": b, "x": None, "y": None, "used_prbs": used[b], "avail_prbs": avail.get(b)} for b in sorted(used))
    ues = tuple({"id": u, "x": None, "y": None, "rate_mbps": rates[u], "cqi": cqi.get(u)} for u in sorted(rates))
    busy = [b for b, v in used.items() if v > 0]
    edges = tuple((u, busy[0]) for u in sorted(rates) if rates[u] > 0) if len(busy) == 1 else ()
    metrics = {
        "connected": k.get(Kpi.CONNECTED_UES, {}).get(msg.node_id),
        "sum_rate_mbps": float(sum(rates[u] for u in sorted(rates))),
        "fairness": k.get(Kpi.FAIRNESS, {}).get(msg.node_id),
    }
    return SceneDescription(msg.timestamp_slot, bss, ues, edges, metrics)
