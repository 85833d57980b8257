import dataclasses
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ricbox.agents.codec import ActionCodec
from ricbox.env.channel import cqi_to_mcs
from ricbox.env.network import AllocationAction, RanEnv, ScenarioConfig, observe
from ricbox.env.render import SceneDescription, SceneLog, read_scenes, render
from ricbox.errors import ActionError, ConfigError, ContractError
from ricbox.harness.config import load_preset


@pytest.mark.invariant
def test_reset_deterministic():
    a = RanEnv(ScenarioConfig()).reset(7)
    b = RanEnv(ScenarioConfig()).reset(7)
    assert a == b
    assert not (a == RanEnv(ScenarioConfig()).reset(8))


def test_zero_ues_rejected():
    with pytest.raises(ConfigError, match="scenario.n_ues"):
        RanEnv(ScenarioConfig(n_ues=0))


def test_paper_preset_scenario():
    cfg = load_preset("paper")
    st_ = RanEnv(cfg.scenario, cfg.channel, cfg.reward).reset(3)
    assert len(st_.bss) == 5
    assert st_.n_ues == 10
    assert all(u.demand == 1.0 for u in st_.ues)
    assert {b.carrier_freq for b in st_.bss} == {3.5}
    assert {b.bandwidth for b in st_.bss} == {10.0}
    assert {b.tx_power for b in st_.bss} == {30.0}


def test_reset_state_shape(env):
    st_ = env.state
    assert st_.timeslot == 0
    assert st_.association == (None,) * 4
    assert st_.per_ue_snr_db.shape == (4, 2)
    assert st_.per_ue_cqi.min() >= 0 and st_.per_ue_cqi.max() <= 15
    assert st_.channel_request.all()


def test_empty_action_zero_rates(env):
    st_, m = env.step(AllocationAction.empty())
    assert m.connected_count == 0
    assert np.all(st_.per_ue_rate == 0)
    assert m.reward == -1.0
    assert st_.timeslot == 1


def test_full_grant_rate_matches_mcs_arithmetic():
    env = RanEnv(ScenarioConfig(ue_speed_mps=0.0))
    st0 = env.reset(11)
    ue, bs = 2, 1
    cqi = int(st0.per_ue_cqi[ue, bs])
    assert cqi >= 1
    st1, m = env.step(AllocationAction(((bs, ue, 12),)))
    eff = cqi_to_mcs(cqi).spectral_efficiency
    assert st1.per_ue_rate[ue] == min(1.0, eff * 10.0)
    assert m.connected_count == 1
    assert st1.association[ue] == bs
    assert not st1.channel_request[ue]


def test_cqi15_full_grant_demand_uncapped():
    sc = ScenarioConfig(n_bss=1, n_ues=1, demand_mbps=100.0, ue_speed_mps=0.0, bs_positions=((200.0, 200.0),),
                        arena_width_m=400.0, arena_height_m=400.0)
    env = RanEnv(sc)
    env.reset(0)
    # force the UE close to the BS so CQI is 15
    env._pos[:] = (200.0, 230.0)
    snr, cqi = env._link()
    env.state = env._snapshot(0, (None,), snr, cqi, np.zeros(1), np.ones(1, bool), np.zeros(1, np.int64))
    assert env.state.per_ue_cqi[0, 0] == 15
    st1, _ = env.step(AllocationAction(((0, 0, 12),)))
    assert st1.per_ue_rate[0] == pytest.approx(min(100.0, 5.5547 * 10.0))


@pytest.mark.invariant
def test_static_ues_keep_snr():
    env = RanEnv(ScenarioConfig(ue_speed_mps=0.0))
    s0 = env.reset(3)
    s1, _ = env.step(AllocationAction.empty())
    s2, _ = env.step(AllocationAction(((0, 1, 12),)))
    assert np.array_equal(s0.per_ue_snr_db, s1.per_ue_snr_db)
    assert np.array_equal(s1.per_ue_snr_db, s2.per_ue_snr_db)


@pytest.mark.parametrize(
    "grants, msg",
    [
        (((0, 0, 13),), "over-allocated"),
        (((0, 0, 6), (0, 1, 7)), "over-allocated"),
        (((0, 9, 1),), "unknown UE"),
        (((5, 0, 1),), "unknown BS"),
        (((0, 0, 4), (1, 0, 4)), "more than one"),
        (((0, 0, -1),), "negative"),
    ],
)
@pytest.mark.invariant
def test_invalid_actions_rejected_without_mutation(env, grants, msg):
    before = env.state
    counts = env.ledger.counts.copy()
    with pytest.raises(ActionError, match=msg):
        env.step(AllocationAction(grants))
    assert env.state is before
    assert np.array_equal(env.ledger.counts, counts)


def test_observe_initial(env):
    obs = env.observe()
    assert obs.shape == (16,)
    blocks = obs.reshape(4, 4)
    assert np.all(blocks[:, 0] == 1.0)  # channel request
    assert np.all(blocks[:, 2] == 0.0)  # rate
    assert np.all((obs >= 0) & (obs <= 1))


def test_observe_length_mismatch(env):
    with pytest.raises(ContractError):
        observe(env.state, np.ones(3))


@pytest.mark.invariant
def test_observe_permutation_moves_blocks(env):
    env.step(AllocationAction(((0, 1, 12),)))
    st_ = env.state
    shares = env.fairness_shares()
    perm = np.array([2, 0, 3, 1])
    permuted = dataclasses.replace(
        st_,
        per_ue_cqi=st_.per_ue_cqi[perm],
        per_ue_rate=st_.per_ue_rate[perm],
        channel_request=st_.channel_request[perm],
        demands=st_.demands[perm],
    )
    a = observe(st_, shares).reshape(4, 4)
    b = observe(permuted, shares[perm]).reshape(4, 4)
    assert np.array_equal(a[perm], b)


def _random_episode(seed, n_slots=60, speed=3.0, shadowing=0.0):
    from ricbox.env.channel import ChannelConfig
    env = RanEnv(ScenarioConfig(ue_speed_mps=speed), ChannelConfig(shadowing_sigma_db=shadowing))
    env.reset(seed)
    codec = ActionCodec(env.n_ues, env.n_bss, 12)
    rng = np.random.default_rng(seed + 100)
    out = []
    for _ in range(n_slots):
        st_, m = env.step(codec.decode(int(rng.integers(codec.n_actions))))
        out.append((st_, m))
    return env, out


@pytest.mark.invariant
@given(st.integers(0, 2**31 - 1))
def test_invariants_over_random_episodes(seed):
    env, trace = _random_episode(seed, 40, speed=25.0)
    W, H = env.scenario.arena_width_m, env.scenario.arena_height_m
    for st_, m in trace:
        assert np.all(st_.per_ue_rate >= 0) and np.all(st_.per_ue_rate <= st_.demands)
        assert np.all(st_.per_bs_used_rgbs <= env.scenario.rgb_count)
        assert np.all((st_.ue_positions[:, 0] >= 0) & (st_.ue_positions[:, 0] <= W))
        assert np.all((st_.ue_positions[:, 1] >= 0) & (st_.ue_positions[:, 1] <= H))
        assert 0 <= m.connected_count <= env.n_ues
        assert m.sum_rate >= 0
        assert np.all((env.observe(st_) >= 0) & (env.observe(st_) <= 1))
        for ue, bs in enumerate(st_.association):
            assert bs is None or 0 <= bs < env.n_bss


@pytest.mark.invariant
def test_same_actions_same_trajectory():
    _, a = _random_episode(5, shadowing=2.0)
    _, b = _random_episode(5, shadowing=2.0)
    assert [m for _, m in a] == [m for _, m in b]
    assert all(x == y for (x, _), (y, _) in zip(a, b))


def test_shadowing_changes_snr_only_when_enabled():
    _, plain = _random_episode(9, 5, speed=0.0)
    _, shadow = _random_episode(9, 5, speed=0.0, shadowing=4.0)
    assert np.array_equal(plain[0][0].per_ue_snr_db, plain[-1][0].per_ue_snr_db)
    assert not np.array_equal(shadow[0][0].per_ue_snr_db, shadow[-1][0].per_ue_snr_db)


# --- render -----------------------------------------------------------------------------------

def test_render_no_associations(env):
    st_, m = env.step(AllocationAction.empty())
    scene = render(st_, m)
    assert scene.edges == ()
    assert len(scene.ues) == 4 and len(scene.bss) == 2


def test_render_edges_and_buckets(env):
    st_, m = env.step(AllocationAction(((0, 2, 12),)))
    scene = render(st_, m)
    assert scene.edges == ((2, 0),)
    assert scene.ues[2]["bucket"] == "good"
    assert scene.ues[0]["bucket"] == "poor"


def test_scene_roundtrip(env, tmp_path):
    st_, m = env.step(AllocationAction(((1, 3, 12),)))
    scene = render(st_, m)
    assert SceneDescription.from_line(scene.to_line()) == scene
    json.loads(scene.to_line())


def test_scene_log_two_slots(env, tmp_path):
    path = tmp_path / "scenes.jsonl"
    with SceneLog(path) as log:
        for _ in range(2):
            st_, m = env.step(AllocationAction.empty())
            log.write(render(st_, m))
    scenes = read_scenes(path)
    assert [s.slot for s in scenes] == [1, 2]
    with SceneLog(tmp_path / "bad.jsonl") as log:
        log.write(scenes[1])
        with pytest.raises(ValueError):
            log.write(scenes[0])
