import dataclasses

import pytest

from ricbox.errors import ConfigError
from ricbox.harness.config import RunConfig, dump_config, load_preset, parse_config, parse_config_text


def test_paper_preset_values():
    cfg = load_preset("paper")
    assert cfg.scenario.n_bss == 5 and cfg.scenario.n_ues == 10
    assert cfg.scenario.demand_mbps == 1.0
    assert cfg.channel.carrier_freq_ghz == 3.5
    assert cfg.channel.bandwidth_mhz == 10.0
    assert cfg.channel.tx_power_dbm == 30.0
    assert cfg.agent.gamma == 0.9
    assert (cfg.agent.actor_lr, cfg.agent.critic_lr) == (0.01, 0.04)
    assert (cfg.agent.hidden_layers, cfg.agent.hidden_width) == (4, 384)
    assert cfg.schedule.slots_per_episode == 1000
    assert 500 <= cfg.schedule.episodes <= 700


def test_desk_preset_values():
    cfg = load_preset("desk")
    assert (cfg.scenario.n_bss, cfg.scenario.n_ues) == (2, 4)
    assert (cfg.schedule.slots_per_episode, cfg.schedule.episodes) == (200, 300)
    assert (cfg.agent.hidden_layers, cfg.agent.hidden_width) == (2, 64)
    assert len(cfg.schedule.seeds) == 5


def test_negative_bandwidth_named():
    with pytest.raises(ConfigError) as e:
        parse_config_text("channel:\n  bandwidth_mhz: -10\n")
    assert e.value.field == "channel.bandwidth_mhz"
    assert e.value.line == 2


def test_unknown_key_with_line():
    with pytest.raises(ConfigError) as e:
        parse_config_text("scenario:\n  n_ues: 4\n  n_uez: 5\n")
    assert e.value.field == "scenario.n_uez"
    assert e.value.line == 3
    assert "unknown" in str(e.value)


def test_unknown_section():
    with pytest.raises(ConfigError, match="bogus"):
        parse_config_text("bogus: {}\n")


def test_wrong_type():
    with pytest.raises(ConfigError, match="agent.hidden_width"):
        parse_config_text("agent:\n  hidden_width: wide\n")


def test_bad_algorithm():
    with pytest.raises(ConfigError, match="agent.algorithm"):
        parse_config_text("agent:\n  algorithm: dqn\n")


def test_nested_ppo_field():
    with pytest.raises(ConfigError) as e:
        parse_config_text("agent:\n  ppo:\n    clip_eps: 1.5\n")
    assert e.value.field == "agent.ppo.clip_eps" and e.value.line == 3


def test_zero_ues():
    with pytest.raises(ConfigError, match="scenario.n_ues"):
        parse_config_text("scenario:\n  n_ues: 0\n")


def test_yaml_syntax_error_reports_line():
    with pytest.raises(ConfigError) as e:
        parse_config_text("scenario:\n  n_ues: [1, 2\n")
    assert e.value.line is not None


def test_empty_file_gives_defaults():
    assert parse_config_text("") == RunConfig()


def test_int_accepted_for_float_field():
    cfg = parse_config_text("scenario:\n  demand_mbps: 2\n")
    assert cfg.scenario.demand_mbps == 2.0 and isinstance(cfg.scenario.demand_mbps, float)


def test_dump_roundtrip(tmp_path):
    for name in ("desk", "paper"):
        cfg = load_preset(name)
        path = tmp_path / f"{name}.yaml"
        path.write_text(dump_config(cfg))
        assert parse_config(str(path)) == cfg
        assert parse_config(str(path)).config_hash() == cfg.config_hash()


def test_hash_changes_with_content():
    a = load_preset("desk")
    b = dataclasses.replace(a, schedule=dataclasses.replace(a.schedule, episodes=10))
    assert a.config_hash() != b.config_hash()


def test_missing_file():
    with pytest.raises(OSError):
        parse_config("/nonexistent/cfg.yaml")
