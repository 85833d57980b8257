"""Discrete-time multi-cell downlink simulator.

One call to :meth:`RanEnv.step` is one scheduling slot: the allocation is
applied against the channel seen at the start of the slot, the fairness
ledger is updated, UEs move one slot along their random-waypoint paths and
the SNR/CQI matrices are recomputed for the next decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ricbox.env.channel import ChannelConfig, cqi_to_mcs, data_rate, snr_from_distance, snr_to_cqi
from ricbox.errors import ActionError, ConfigError, ContractError
from ricbox.fairness import FairnessLedger, RewardConfig, fairness_ratio, fairness_shares, reward, update_ledger


@dataclass(frozen=True)
class ScenarioConfig:
    arena_width_m: float = 400.0
    arena_height_m: float = 400.0
    n_bss: int = 2
    n_ues: int = 4
    demand_mbps: float = 1.0
    ue_speed_mps: float = 1.5
    rgb_count: int = 12
    slot_duration_s: float = 1.0
    # None -> grid layout, see bs_layout()
    bs_positions: tuple | None = None

    def validate(self, prefix: str = "scenario") -> None:
        for name in ("arena_width_m", "arena_height_m", "demand_mbps", "slot_duration_s"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{prefix}.{name}", "must be > 0")
        for name in ("n_bss", "n_ues", "rgb_count"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{prefix}.{name}", "must be an integer >= 1")
        if not self.ue_speed_mps >= 0:
            raise ConfigError(f"{prefix}.ue_speed_mps", "must be >= 0")
        if self.bs_positions is not None:
            if len(self.bs_positions) != self.n_bss:
                raise ConfigError(f"{prefix}.bs_positions", f"expected {self.n_bss} positions")
            for x, y in self.bs_positions:
                if not (0 <= x <= self.arena_width_m and 0 <= y <= self.arena_height_m):
                    raise ConfigError(f"{prefix}.bs_positions", f"({x}, {y}) outside the arena")


def validate_channel(cfg: ChannelConfig, prefix: str = "channel") -> None:
    for name in ("tx_power_dbm", "carrier_freq_ghz", "bandwidth_mhz", "path_loss_exponent", "reference_distance_m"):
        v = getattr(cfg, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ConfigError(f"{prefix}.{name}", "must be a finite number > 0")
    if not cfg.noise_figure_db >= 0:
        raise ConfigError(f"{prefix}.noise_figure_db", "must be >= 0")
    if not cfg.shadowing_sigma_db >= 0:
        raise ConfigError(f"{prefix}.shadowing_sigma_db", "must be >= 0")


def bs_layout(sc: ScenarioConfig) -> list[tuple[float, float]]:
    """Cell centres of a near-square grid, filled row by row."""
    if sc.bs_positions is not None:
        return [(float(x), float(y)) for x, y in sc.bs_positions]
    cols = math.ceil(math.sqrt(sc.n_bss))
    rows = math.ceil(sc.n_bss / cols)
    out = []
    for k in range(sc.n_bss):
        r, c = divmod(k, cols)
        out.append(((c + 0.5) * sc.arena_width_m / cols, (r + 0.5) * sc.arena_height_m / rows))
    return out


@dataclass(frozen=True)
class BaseStation:
    id: int
    position: tuple[float, float]
    tx_power: float
    carrier_freq: float
    bandwidth: float
    rgb_count: int


@dataclass(frozen=True)
class UserEquipment:
    id: int
    position: tuple[float, float]
    velocity: tuple[float, float]
    demand: float
    waypoint: tuple[float, float]


@dataclass(frozen=True)
class AllocationAction:
    """RGB grants for one slot as (bs_id, ue_id, rgb_share) triples."""

    grants: tuple[tuple[int, int, int], ...] = ()

    @classmethod
    def empty(cls) -> "AllocationAction":
        return cls(())

    def per_bs(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list[tuple[int, int]]] = {}
        for bs, ue, share in self.grants:
            out.setdefault(bs, []).append((ue, share))
        return out


@dataclass(frozen=True)
class StepMetrics:
    connected_count: int
    sum_rate: float
    fairness_ratio: float
    reward: float


@dataclass(frozen=True, eq=False)
class NetworkState:
    timeslot: int
    bss: tuple[BaseStation, ...]
    ue_positions: np.ndarray
    ue_velocities: np.ndarray
    ue_waypoints: np.ndarray
    demands: np.ndarray
    association: tuple[int | None, ...]
    per_ue_snr_db: np.ndarray
    per_ue_cqi: np.ndarray
    per_ue_rate: np.ndarray
    channel_request: np.ndarray
    per_bs_used_rgbs: np.ndarray

    @property
    def n_ues(self) -> int:
        return len(self.demands)

    @property
    def ues(self) -> list[UserEquipment]:
        return [
            UserEquipment(
                id=i,
                position=tuple(self.ue_positions[i]),
                velocity=tuple(self.ue_velocities[i]),
                demand=float(self.demands[i]),
                waypoint=tuple(self.ue_waypoints[i]),
            )
            for i in range(self.n_ues)
        ]

    def best_cqi(self) -> np.ndarray:
        return self.per_ue_cqi.max(axis=1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NetworkState):
            return NotImplemented
        arrays = ("ue_positions", "ue_velocities", "ue_waypoints", "demands",
                  "per_ue_snr_db", "per_ue_cqi", "per_ue_rate", "channel_request", "per_bs_used_rgbs")
        return (
            self.timeslot == other.timeslot
            and self.bss == other.bss
            and self.association == other.association
            and all(np.array_equal(getattr(self, a), getattr(other, a)) for a in arrays)
        )


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


class RanEnv:
    """Owns the mutable simulation state of one run; not shared between runs."""

    def __init__(self, scenario: ScenarioConfig = ScenarioConfig(), channel: ChannelConfig = ChannelConfig(),
                 reward_cfg: RewardConfig = RewardConfig()):
        scenario.validate()
        validate_channel(channel)
        self.scenario = scenario
        self.channel = channel
        self.reward_cfg = reward_cfg
        self.bss = tuple(
            BaseStation(i, pos, channel.tx_power_dbm, channel.carrier_freq_ghz, channel.bandwidth_mhz, scenario.rgb_count)
            for i, pos in enumerate(bs_layout(scenario))
        )
        self._bs_xy = np.array([b.position for b in self.bss], dtype=np.float64)
        self._arena = np.array([scenario.arena_width_m, scenario.arena_height_m])
        self.ledger = FairnessLedger(scenario.n_ues, reward_cfg.window)
        self.state: NetworkState | None = None
        self._rng: np.random.Generator | None = None

    @property
    def n_ues(self) -> int:
        return self.scenario.n_ues

    @property
    def n_bss(self) -> int:
        return self.scenario.n_bss

    def reset(self, seed: int) -> NetworkState:
        sc = self.scenario
        self._rng = np.random.default_rng(seed)
        self._pos = self._rng.uniform(0.0, 1.0, size=(sc.n_ues, 2)) * self._arena
        self._wp = self._rng.uniform(0.0, 1.0, size=(sc.n_ues, 2)) * self._arena
        self._vel = self._velocity()
        self._demand = np.full(sc.n_ues, float(sc.demand_mbps))
        self.ledger = FairnessLedger(sc.n_ues, self.reward_cfg.window)
        snr, cqi = self._link()
        self.state = self._snapshot(0, (None,) * sc.n_ues, snr, cqi, np.zeros(sc.n_ues), np.ones(sc.n_ues, dtype=bool),
                                    np.zeros(sc.n_bss, dtype=np.int64))
        return self.state

    def validate(self, action: AllocationAction) -> None:
        """Raise ActionError unless ``action`` fits the current slot."""
        used = np.zeros(self.n_bss, dtype=np.int64)
        seen: set[int] = set()
        for bs, ue, share in action.grants:
            if not 0 <= bs < self.n_bss:
                raise ActionError(f"unknown BS id {bs}")
            if not 0 <= ue < self.n_ues:
                raise ActionError(f"unknown UE id {ue}")
            if share < 0:
                raise ActionError(f"negative rgb_share {share} for UE {ue}")
            if share == 0:
                continue
            if ue in seen:
                raise ActionError(f"UE {ue} granted RGBs by more than one entry")
            seen.add(ue)
            used[bs] += share
        over = np.flatnonzero(used > self.scenario.rgb_count)
        if over.size:
            b = int(over[0])
            raise ActionError(f"BS {b} over-allocated: {used[b]} > {self.scenario.rgb_count} RGBs")

    def step(self, action: AllocationAction) -> tuple[NetworkState, StepMetrics]:
        if self.state is None:
            raise ContractError("step() before reset()")
        self.validate(action)
        st = self.state
        n = self.n_ues
        rates = np.zeros(n)
        connected = np.zeros(n, dtype=bool)
        serving: list[int | None] = [None] * n
        used = np.zeros(self.n_bss, dtype=np.int64)
        for bs, ue, share in action.grants:
            if share == 0:
                continue
            used[bs] += share
            cqi = int(st.per_ue_cqi[ue, bs])
            if cqi >= 1:
                rates[ue] = data_rate(cqi_to_mcs(cqi), share, self.bss[bs], self._demand[ue])
                connected[ue] = True
                serving[ue] = bs

        update_ledger(self.ledger, action)
        fr = fairness_ratio(self.ledger)
        r = reward(rates, self._demand, connected, fr, self.reward_cfg)
        metrics = StepMetrics(int(connected.sum()), float(rates.sum()), fr, r)

        self._move()
        snr, cqi = self._link()
        self.state = self._snapshot(st.timeslot + 1, tuple(serving), snr, cqi, rates, rates < self._demand, used)
        return self.state, metrics

    def fairness_shares(self) -> np.ndarray:
        return fairness_shares(self.ledger)

    def observe(self, state: NetworkState | None = None) -> np.ndarray:
        return observe(self.state if state is None else state, self.fairness_shares())

    def _velocity(self) -> np.ndarray:
        delta = self._wp - self._pos
        dist = np.linalg.norm(delta, axis=1, keepdims=True)
        unit = np.divide(delta, dist, out=np.zeros_like(delta), where=dist > 0)
        return unit * self.scenario.ue_speed_mps

    def _move(self) -> None:
        stride = self.scenario.ue_speed_mps * self.scenario.slot_duration_s
        if stride == 0:
            return
        delta = self._wp - self._pos
        dist = np.linalg.norm(delta, axis=1)
        arrived = dist <= stride
        going = ~arrived
        self._pos[going] += delta[going] / dist[going, None] * stride
        if arrived.any():
            self._pos[arrived] = self._wp[arrived]
            self._wp[arrived] = self._rng.uniform(0.0, 1.0, size=(int(arrived.sum()), 2)) * self._arena
        # float round-off guard; waypoints are inside so the path is too
        np.clip(self._pos, 0.0, self._arena, out=self._pos)
        self._vel = self._velocity()

    def _link(self) -> tuple[np.ndarray, np.ndarray]:
        d = np.linalg.norm(self._pos[:, None, :] - self._bs_xy[None, :, :], axis=2)
        snr = snr_from_distance(d, self.channel)
        if self.channel.shadowing_sigma_db > 0:
            snr = snr + self._rng.normal(0.0, self.channel.shadowing_sigma_db, size=snr.shape)
        return snr, snr_to_cqi(snr)

    def _snapshot(self, t, association, snr, cqi, rates, request, used) -> NetworkState:
        return NetworkState(
            timeslot=t,
            bss=self.bss,
            ue_positions=_frozen(self._pos),
            ue_velocities=_frozen(self._vel),
            ue_waypoints=_frozen(self._wp),
            demands=_frozen(self._demand),
            association=association,
            per_ue_snr_db=_frozen(snr),
            per_ue_cqi=_frozen(cqi),
            per_ue_rate=_frozen(rates),
            channel_request=_frozen(request),
            per_bs_used_rgbs=_frozen(used),
        )


OBS_FIELDS = ("channel_request", "best_cqi", "rate", "fairness_share")


def pack_observation(request, best_cqi, rate, demand, shares) -> np.ndarray:
    """Per UE, in UE-id order: [request flag, best CQI / 15, rate / demand, fairness share]."""
    obs = np.empty((len(request), 4))
    obs[:, 0] = np.asarray(request, dtype=np.float64)
    obs[:, 1] = np.asarray(best_cqi, dtype=np.float64) / 15.0
    obs[:, 2] = np.asarray(rate, dtype=np.float64) / np.asarray(demand, dtype=np.float64)
    obs[:, 3] = shares
    return obs.reshape(-1)


def observe(state: NetworkState, fairness_shares) -> np.ndarray:
    shares = np.asarray(fairness_shares, dtype=np.float64)
    if shares.shape != (state.n_ues,):
        raise ContractError(f"fairness_shares has length {shares.size}, expected {state.n_ues}")
    return pack_observation(state.channel_request, state.best_cqi(), state.per_ue_rate, state.demands, shares)
