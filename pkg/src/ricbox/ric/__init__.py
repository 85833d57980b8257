from ricbox.ric.bus import BusEnv, E2Node, Pipe
from ricbox.ric.kpimon import KpiMon, kpimon_collect
from ricbox.ric.store import OrderError, TimeSeriesStore, ts_query, ts_write
from ricbox.ric.wire import (
    ControlMessage,
    DecodeError,
    EncodeError,
    IndicationMessage,
    Kpi,
    KpiRecord,
    decode,
    encode,
    iter_messages,
)
from ricbox.ric.xapp import DecisionError, NodeRegistration, XApp, xapp_decide

__all__ = [
    "BusEnv", "ControlMessage", "DecisionError", "DecodeError", "E2Node", "EncodeError", "IndicationMessage",
    "Kpi", "KpiMon", "KpiRecord", "NodeRegistration", "OrderError", "Pipe", "TimeSeriesStore", "XApp",
    "decode", "encode", "iter_messages", "kpimon_collect", "ts_query", "ts_write", "xapp_decide",
]
