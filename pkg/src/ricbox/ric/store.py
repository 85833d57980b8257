"""Append-only in-memory KPI time series, with optional spill to disk.

The spill file is the concatenation of encoded indication messages, so it
replays through the same decoder as the live bus.
"""

from __future__ import annotations

import bisect
import threading
from pathlib import Path

from ricbox.ric.wire import IndicationMessage, encode

Key = tuple[int, int]  # (kpi_id, subject_id)


class OrderError(ValueError):
    pass


class TimeSeriesStore:
    """One writer, any number of readers.

    Points are appended as (slot, value) tuples to a per-key list; a reader
    takes the list length first and only looks at that prefix.
    """

    def __init__(self, spill_path=None):
        self._series: dict[Key, list[tuple[int, float]]] = {}
        self._write_lock = threading.Lock()
        self.spill_path = Path(spill_path) if spill_path is not None else None
        self._spill = self.spill_path.open("wb") if self.spill_path is not None else None

    def keys(self) -> list[Key]:
        return sorted(self._series)

    def write(self, key: Key, slot: int, value: float) -> None:
        with self._write_lock:
            pts = self._series.get(key)
            if pts and slot <= pts[-1][0]:
                raise OrderError(f"slot {slot} not after {pts[-1][0]} for key {key}")
            self._series.setdefault(key, []).append((slot, float(value)))

    def write_indication(self, msg: IndicationMessage) -> None:
        """Store every record of ``msg`` at its slot; all-or-nothing on order errors."""
        with self._write_lock:
            seen = set()
            for r in msg.records:
                key = (r.kpi_id, r.subject_id)
                pts = self._series.get(key)
                if key in seen or (pts and msg.timestamp_slot <= pts[-1][0]):
                    raise OrderError(f"slot {msg.timestamp_slot} not after last point for key {key}")
                seen.add(key)
            for r in msg.records:
                self._series.setdefault((r.kpi_id, r.subject_id), []).append((msg.timestamp_slot, r.value))
            if self._spill is not None:
                self._spill.write(encode(msg))

    def query(self, key: Key, first_slot: int, last_slot: int) -> list[tuple[int, float]]:
        """Points with first_slot <= slot <= last_slot, in slot order."""
        pts = self._series.get(key, [])
        n = len(pts)
        lo = bisect.bisect_left(pts, first_slot, 0, n, key=lambda p: p[0])
        hi = bisect.bisect_right(pts, last_slot, lo, n, key=lambda p: p[0])
        return pts[lo:hi]

    def latest(self, key: Key) -> tuple[int, float] | None:
        pts = self._series.get(key)
        return pts[-1] if pts else None

    def flush(self) -> None:
        if self._spill is not None:
            self._spill.flush()

    def close(self) -> None:
        if self._spill is not None:
            self._spill.close()
            self._spill = None


# functional aliases
def ts_write(store: TimeSeriesStore, key: Key, slot: int, value: float) -> None:
    store.write(key, slot, value)


def ts_query(store: TimeSeriesStore, key: Key, slot_range: tuple[int, int]) -> list[tuple[int, float]]:
    return store.query(key, *slot_range)
