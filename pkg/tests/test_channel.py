import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ricbox.env.channel import (
    ChannelConfig,
    CqiRangeError,
    McsEntry,
    cqi_thresholds,
    cqi_to_mcs,
    data_rate,
    mcs_table,
    snr_db,
    snr_from_distance,
    snr_to_cqi,
)
from ricbox.env.network import BaseStation, UserEquipment

CFG = ChannelConfig()


def _bs(rgb_count=12, bandwidth=10.0):
    return BaseStation(0, (0.0, 0.0), 30.0, 3.5, bandwidth, rgb_count)


def _ue(x, y=0.0):
    return UserEquipment(0, (x, y), (0.0, 0.0), 1.0, (0.0, 0.0))


def test_snr_golden_100m():
    # 30 dBm - [20log10(4*pi*3.5e9/c) + 30 log10(100)] - (-174 + 70 + 9), evaluated by hand
    assert snr_db(_ue(100.0), _bs(), CFG) == pytest.approx(21.670855891111103, abs=1e-9)


def test_snr_clamped_below_one_metre():
    at_1m = snr_db(_ue(1.0), _bs(), CFG)
    assert snr_db(_ue(0.0), _bs(), CFG) == at_1m
    assert snr_db(_ue(0.3), _bs(), CFG) == at_1m
    assert at_1m > snr_db(_ue(1.5), _bs(), CFG)


@pytest.mark.invariant
@given(st.floats(1.0, 1e4))
def test_doubling_distance_costs_10n_log2(d):
    drop = float(snr_from_distance(d, CFG) - snr_from_distance(2 * d, CFG))
    assert drop == pytest.approx(10 * CFG.path_loss_exponent * math.log10(2), abs=1e-9)


@pytest.mark.invariant
@given(st.floats(0.0, 1e4), st.floats(0.0, 1e4))
def test_snr_monotone_in_distance(d1, d2):
    lo, hi = sorted((d1, d2))
    assert snr_from_distance(lo, CFG) >= snr_from_distance(hi, CFG)


def test_threshold_table_shape():
    th = cqi_thresholds()
    assert len(th) == 15
    assert th[0] == -6.0 and th[-1] == 22.0
    assert np.allclose(np.diff(th), 2.0)


def test_cqi_floor_ceiling_and_ties():
    assert snr_to_cqi(-100.0) == 0
    assert snr_to_cqi(-6.0 - 1e-9) == 0
    assert snr_to_cqi(100.0) == 15
    for k, t in enumerate(cqi_thresholds(), start=1):
        assert snr_to_cqi(float(t)) == k


@pytest.mark.invariant
@given(st.floats(-50, 50), st.floats(-50, 50))
def test_cqi_monotone(a, b):
    lo, hi = sorted((a, b))
    assert snr_to_cqi(lo) <= snr_to_cqi(hi)


@pytest.mark.invariant
def test_cqi_vectorised_matches_scalar():
    snr = np.linspace(-10, 30, 81).reshape(9, 9)
    vec = snr_to_cqi(snr)
    assert vec.shape == snr.shape
    assert all(vec.flat[i] == snr_to_cqi(float(snr.flat[i])) for i in range(snr.size))


def test_mcs_table_matches_3gpp_cqi_table_1():
    t = mcs_table()
    assert [e.cqi for e in t] == list(range(1, 16))
    # first and last rows of the 4-bit CQI table
    assert (t[0].modulation_order, t[0].code_rate_x1024, t[0].spectral_efficiency) == (2, 78, 0.1523)
    assert (t[-1].modulation_order, t[-1].code_rate_x1024, t[-1].spectral_efficiency) == (6, 948, 5.5547)
    for e in t:
        # efficiency = Qm * R / 1024, rounded to 4 decimals in the table
        assert e.spectral_efficiency == pytest.approx(e.modulation_order * e.code_rate_x1024 / 1024, abs=6e-4)


@pytest.mark.invariant
def test_mcs_efficiency_monotone():
    eff = [cqi_to_mcs(k).spectral_efficiency for k in range(1, 16)]
    assert all(b >= a for a, b in zip(eff, eff[1:]))
    assert cqi_to_mcs(15).spectral_efficiency == max(eff)


@pytest.mark.parametrize("bad", [0, 16, -1])
def test_cqi_to_mcs_out_of_range(bad):
    with pytest.raises(CqiRangeError):
        cqi_to_mcs(bad)


def test_data_rate_zero_share():
    assert data_rate(cqi_to_mcs(15), 0, _bs(), 1.0) == 0.0


def test_data_rate_demand_capped():
    eff2 = McsEntry(8, 4, 490, 2.0)
    # 2.0 bit/s/Hz over 10 MHz is 20 Mbps, above the 1 Mbps cap
    assert data_rate(eff2, 12, _bs(), 1.0) == 1.0


def test_data_rate_partial_bandwidth():
    eff = McsEntry(1, 2, 78, 0.1)
    bs = _bs(rgb_count=10)
    assert data_rate(eff, 1, bs, 5.0) == pytest.approx(0.1)


def test_data_rate_full_bs_cqi15():
    bs = _bs()
    expected = min(1.0, 5.5547 * 10.0 * 12 / 12)
    assert data_rate(cqi_to_mcs(15), 12, bs, 1.0) == expected
    assert data_rate(cqi_to_mcs(15), 12, bs, 100.0) == pytest.approx(55.547)


def test_data_rate_over_capacity():
    with pytest.raises(ValueError):
        data_rate(cqi_to_mcs(15), 13, _bs(), 1.0)
