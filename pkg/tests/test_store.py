import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ricbox.ric.store import OrderError, TimeSeriesStore, ts_query, ts_write
from ricbox.ric.wire import IndicationMessage, KpiRecord, iter_messages


def test_write_and_query_inclusive():
    s = TimeSeriesStore()
    for t in range(10):
        s.write((4, 0), t, t * 0.5)
    assert s.query((4, 0), 3, 5) == [(3, 1.5), (4, 2.0), (5, 2.5)]
    assert s.query((4, 0), 20, 30) == []
    assert s.query((9, 9), 0, 10) == []
    assert s.latest((4, 0)) == (9, 4.5)
    assert s.latest((1, 1)) is None


@pytest.mark.invariant
def test_out_of_order_rejected():
    s = TimeSeriesStore()
    ts_write(s, (1, 0), 5, 1.0)
    with pytest.raises(OrderError):
        ts_write(s, (1, 0), 5, 2.0)
    with pytest.raises(OrderError):
        ts_write(s, (1, 0), 4, 2.0)
    # other keys are independent
    ts_write(s, (2, 0), 1, 1.0)
    assert ts_query(s, (1, 0), (0, 10)) == [(5, 1.0)]


def test_write_indication_all_or_nothing():
    s = TimeSeriesStore()
    s.write_indication(IndicationMessage(0, 3, (KpiRecord(1, 0, 1.0), KpiRecord(2, 0, 2.0))))
    s.write((2, 0), 4, 9.0)
    with pytest.raises(OrderError):
        s.write_indication(IndicationMessage(0, 4, (KpiRecord(1, 0, 5.0), KpiRecord(2, 0, 6.0))))
    assert s.query((1, 0), 0, 10) == [(3, 1.0)]
    with pytest.raises(OrderError):
        s.write_indication(IndicationMessage(0, 9, (KpiRecord(1, 0, 5.0), KpiRecord(1, 0, 6.0))))


def test_spill_file_replays(tmp_path):
    path = tmp_path / "spill.bin"
    s = TimeSeriesStore(path)
    msgs = [IndicationMessage(0, t, (KpiRecord(4, 0, float(t)),)) for t in range(5)]
    for m in msgs:
        s.write_indication(m)
    s.close()
    assert [m for _, m in iter_messages(path.read_bytes())] == msgs


@given(st.lists(st.integers(0, 1000), unique=True, min_size=1, max_size=60), st.integers(0, 1000),
       st.integers(0, 1000))
@pytest.mark.invariant
def test_query_matches_filter(slots, a, b):
    slots = sorted(slots)
    s = TimeSeriesStore()
    for t in slots:
        s.write((1, 0), t, float(t))
    lo, hi = min(a, b), max(a, b)
    assert [t for t, _ in s.query((1, 0), lo, hi)] == [t for t in slots if lo <= t <= hi]


def test_concurrent_reader_sees_consistent_prefix():
    s = TimeSeriesStore()
    n = 20_000
    errors = []

    def reader():
        while True:
            pts = s.query((1, 0), 0, n)
            if [t for t, _ in pts] != list(range(len(pts))):
                errors.append(len(pts))
            if len(pts) == n:
                return

    th = threading.Thread(target=reader)
    th.start()
    for t in range(n):
        s.write((1, 0), t, float(t))
    th.join(timeout=30)
    assert not errors
