"""Link budget and link adaptation: SNR, CQI lookup, MCS table, per-slot rate.

Channel model: log-distance path loss anchored to free space at the
reference distance,

    PL(d) = 20 log10(4 pi d0 f / c) + 10 n log10(d / d0),

and a thermal noise floor of -174 dBm/Hz + 10 log10(B) + NF.  Distances
below ``MIN_DISTANCE_M`` are clamped.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0
THERMAL_NOISE_DBM_HZ = -174.0
MIN_DISTANCE_M = 1.0


class ChannelTableError(ValueError):
    """A shipped lookup table failed validation at load time."""


class CqiRangeError(ValueError):
    """CQI outside 1..15 handed to the MCS lookup."""


@dataclass(frozen=True)
class ChannelConfig:
    tx_power_dbm: float = 30.0
    carrier_freq_ghz: float = 3.5
    bandwidth_mhz: float = 10.0
    path_loss_exponent: float = 3.0
    noise_figure_db: float = 9.0
    reference_distance_m: float = 1.0
    shadowing_sigma_db: float = 0.0


@dataclass(frozen=True)
class McsEntry:
    cqi: int
    modulation_order: int
    code_rate_x1024: int
    spectral_efficiency: float


def reference_path_loss_db(carrier_freq_ghz: float, reference_distance_m: float = 1.0) -> float:
    """Free-space loss at the reference distance."""
    f_hz = carrier_freq_ghz * 1e9
    return 20.0 * math.log10(4.0 * math.pi * reference_distance_m * f_hz / SPEED_OF_LIGHT)


def noise_floor_dbm(bandwidth_mhz: float, noise_figure_db: float) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(bandwidth_mhz * 1e6) + noise_figure_db


def path_loss_db(distance_m, cfg: ChannelConfig):
    d = np.maximum(np.asarray(distance_m, dtype=np.float64), MIN_DISTANCE_M)
    pl0 = reference_path_loss_db(cfg.carrier_freq_ghz, cfg.reference_distance_m)
    return pl0 + 10.0 * cfg.path_loss_exponent * np.log10(d / cfg.reference_distance_m)


def snr_from_distance(distance_m, cfg: ChannelConfig, tx_power_dbm: float | None = None):
    """Vectorised SNR in dB for an array of distances."""
    tx = cfg.tx_power_dbm if tx_power_dbm is None else tx_power_dbm
    return tx - path_loss_db(distance_m, cfg) - noise_floor_dbm(cfg.bandwidth_mhz, cfg.noise_figure_db)


def snr_db(ue, bs, cfg: ChannelConfig) -> float:
    """SNR of the downlink from ``bs`` to ``ue`` (objects with ``.position``)."""
    d = math.dist(ue.position, bs.position)
    return float(snr_from_distance(d, cfg, bs.tx_power))


def coverage_radius_m(cfg: ChannelConfig, min_snr_db: float, tx_power_dbm: float | None = None) -> float:
    """Distance at which the SNR falls to ``min_snr_db``."""
    tx = cfg.tx_power_dbm if tx_power_dbm is None else tx_power_dbm
    budget = tx - noise_floor_dbm(cfg.bandwidth_mhz, cfg.noise_figure_db) - min_snr_db
    excess = budget - reference_path_loss_db(cfg.carrier_freq_ghz, cfg.reference_distance_m)
    return cfg.reference_distance_m * 10.0 ** (excess / (10.0 * cfg.path_loss_exponent))


def _read_rows(name: str) -> list[dict[str, str]]:
    text = resources.files("ricbox.data").joinpath(name).read_text()
    return list(csv.DictReader(text.splitlines()))


@lru_cache(maxsize=None)
def cqi_thresholds() -> np.ndarray:
    """SNR lower bounds (dB) for CQI 1..15, index 0 is CQI 1."""
    rows = _read_rows("cqi_thresholds.csv")
    if [int(r["cqi"]) for r in rows] != list(range(1, 16)):
        raise ChannelTableError("cqi_thresholds.csv must list CQI 1..15 in order")
    th = np.array([float(r["snr_db_lower_bound"]) for r in rows])
    if np.any(np.diff(th) <= 0):
        raise ChannelTableError("cqi_thresholds.csv thresholds must strictly increase")
    th.setflags(write=False)
    return th


@lru_cache(maxsize=None)
def mcs_table() -> tuple[McsEntry, ...]:
    rows = _read_rows("cqi_mcs_table.csv")
    table = tuple(
        McsEntry(
            cqi=int(r["cqi"]),
            modulation_order=int(r["modulation_order"]),
            code_rate_x1024=int(r["code_rate_x1024"]),
            spectral_efficiency=float(r["spectral_efficiency"]),
        )
        for r in rows
    )
    if [e.cqi for e in table] != list(range(1, 16)):
        raise ChannelTableError("cqi_mcs_table.csv must list CQI 1..15 in order")
    for lo, hi in zip(table, table[1:]):
        if hi.spectral_efficiency < lo.spectral_efficiency:
            raise ChannelTableError(f"spectral efficiency decreases at CQI {hi.cqi}")
    return table


@lru_cache(maxsize=None)
def spectral_efficiency_by_cqi() -> np.ndarray:
    """Length-16 array; entry 0 (CQI 0, no transmission) is 0."""
    eff = np.zeros(16)
    for e in mcs_table():
        eff[e.cqi] = e.spectral_efficiency
    eff.setflags(write=False)
    return eff


def snr_to_cqi(snr):
    """Highest CQI whose threshold is <= snr (inclusive lower bounds); 0 below all.

    Accepts a scalar (returns int) or an array (returns an int array).
    """
    idx = np.searchsorted(cqi_thresholds(), snr, side="right")
    if np.ndim(idx) == 0:
        return int(idx)
    return idx.astype(np.int64)


def cqi_to_mcs(cqi: int) -> McsEntry:
    if not 1 <= cqi <= 15:
        raise CqiRangeError(f"CQI {cqi} has no MCS entry (valid range 1..15)")
    return mcs_table()[cqi - 1]


def data_rate(mcs: McsEntry | None, rgb_share: int, bs, demand: float) -> float:
    """Rate in Mbps served to one UE in one slot, capped by its demand."""
    if rgb_share <= 0 or mcs is None:
        return 0.0
    if rgb_share > bs.rgb_count:
        raise ValueError(f"rgb_share {rgb_share} exceeds BS {bs.id} capacity {bs.rgb_count}")
    capacity = mcs.spectral_efficiency * bs.bandwidth * rgb_share / bs.rgb_count
    return min(demand, capacity)
