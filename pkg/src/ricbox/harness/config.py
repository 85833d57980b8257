"""Run configuration: YAML file -> validated, frozen dataclasses.

Top-level sections: scenario, channel, reward, agent (with nested ppo),
schedule, io.  Unknown keys are rejected; every error names the dotted
field and, when parsed from a file, its line.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from ricbox.agents.a2c import A2cConfig
from ricbox.agents.ppo import PpoConfig
from ricbox.env.channel import ChannelConfig
from ricbox.env.network import ScenarioConfig, validate_channel
from ricbox.errors import ConfigError
from ricbox.fairness import RewardConfig

PRESETS = ("desk", "paper")


@dataclass(frozen=True)
class PpoSection:
    clip_eps: float = 0.2
    epochs: int = 4
    minibatch_size: int = 50
    value_coef: float = 1.0


@dataclass(frozen=True)
class AgentConfig:
    algorithm: str = "ppo"
    gamma: float = 0.9
    actor_lr: float = 0.01
    critic_lr: float = 0.04
    hidden_layers: int = 2
    hidden_width: int = 64
    max_grad_norm: float = 5.0
    entropy_coef: float = 0.01
    normalize_advantages: bool = True
    ppo: PpoSection = PpoSection()


@dataclass(frozen=True)
class ScheduleConfig:
    slots_per_episode: int = 200
    episodes: int = 300
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)


@dataclass(frozen=True)
class IoConfig:
    output_dir: str = "runs"
    checkpoint_every: int = 100  # episodes; 0 -> final checkpoint only
    scene_episodes: tuple[int, ...] = (0,)  # episodes rendered to the scene log; -1 = last
    spill: bool = True
    wall_clock: bool = True  # False writes wall_ms = 0 so metrics CSVs are byte-stable


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig = ScenarioConfig()
    channel: ChannelConfig = ChannelConfig()
    reward: RewardConfig = RewardConfig()
    agent: AgentConfig = AgentConfig()
    schedule: ScheduleConfig = ScheduleConfig()
    io: IoConfig = IoConfig()

    def a2c(self) -> A2cConfig:
        a = self.agent
        return A2cConfig(a.gamma, a.entropy_coef, a.normalize_advantages)

    def ppo(self) -> PpoConfig:
        a = self.agent
        p = a.ppo
        return PpoConfig(a.gamma, p.clip_eps, p.epochs, p.minibatch_size, a.entropy_coef, p.value_coef,
                         a.normalize_advantages)

    def with_algorithm(self, algorithm: str) -> "RunConfig":
        return dataclasses.replace(self, agent=dataclasses.replace(self.agent, algorithm=algorithm))

    def to_dict(self) -> dict:
        return _plain(dataclasses.asdict(self))

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    def validate(self) -> "RunConfig":
        self.scenario.validate("scenario")
        validate_channel(self.channel, "channel")
        r = self.reward
        _check(r.full_reward > 0, "reward.full_reward", "must be > 0")
        _check(r.failure_penalty <= 0, "reward.failure_penalty", "must be <= 0")
        _check(_is_int(r.window) and r.window >= 1, "reward.window", "must be an integer >= 1")
        a = self.agent
        _check(a.algorithm in ("a2c", "ppo"), "agent.algorithm", "must be 'a2c' or 'ppo'")
        _check(0 < a.gamma <= 1, "agent.gamma", "must be in (0, 1]")
        _check(a.actor_lr > 0, "agent.actor_lr", "must be > 0")
        _check(a.critic_lr > 0, "agent.critic_lr", "must be > 0")
        _check(_is_int(a.hidden_layers) and a.hidden_layers >= 1, "agent.hidden_layers", "must be an integer >= 1")
        _check(_is_int(a.hidden_width) and a.hidden_width >= 1, "agent.hidden_width", "must be an integer >= 1")
        _check(a.max_grad_norm > 0, "agent.max_grad_norm", "must be > 0")
        _check(a.entropy_coef >= 0, "agent.entropy_coef", "must be >= 0")
        _check(0 < a.ppo.clip_eps < 1, "agent.ppo.clip_eps", "must be in (0, 1)")
        _check(_is_int(a.ppo.epochs) and a.ppo.epochs >= 1, "agent.ppo.epochs", "must be an integer >= 1")
        _check(_is_int(a.ppo.minibatch_size) and a.ppo.minibatch_size >= 1, "agent.ppo.minibatch_size",
               "must be an integer >= 1")
        _check(a.ppo.value_coef > 0, "agent.ppo.value_coef", "must be > 0")
        s = self.schedule
        _check(_is_int(s.slots_per_episode) and s.slots_per_episode >= 1, "schedule.slots_per_episode",
               "must be an integer >= 1")
        _check(_is_int(s.episodes) and s.episodes >= 1, "schedule.episodes", "must be an integer >= 1")
        _check(len(s.seeds) >= 1 and all(_is_int(x) and x >= 0 for x in s.seeds), "schedule.seeds",
               "must be a non-empty list of non-negative integers")
        io = self.io
        _check(_is_int(io.checkpoint_every) and io.checkpoint_every >= 0, "io.checkpoint_every",
               "must be an integer >= 0")
        _check(all(_is_int(e) and e >= -1 for e in io.scene_episodes), "io.scene_episodes",
               "must be a list of episode indices (-1 = last)")
        return self


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _check(ok: bool, name: str, msg: str) -> None:
    if not ok:
        raise ConfigError(name, msg)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


_SECTIONS = {
    "scenario": ScenarioConfig,
    "channel": ChannelConfig,
    "reward": RewardConfig,
    "agent": AgentConfig,
    "schedule": ScheduleConfig,
    "io": IoConfig,
}
_NESTED = {("agent", "ppo"): PpoSection}


def _line_map(text: str) -> dict[str, int]:
    """Dotted key path -> 1-based line of the key in the YAML source."""
    out: dict[str, int] = {}

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                path = f"{prefix}.{k.value}" if prefix else str(k.value)
                out[path] = k.start_mark.line + 1
                walk(v, path)

    root = yaml.compose(text)
    if root is not None:
        walk(root, "")
    return out


def _coerce(cls, name: str, value, raw: dict, lines: dict):
    """Build dataclass ``cls`` from mapping ``value`` at dotted path ``name``."""
    if not isinstance(value, dict):
        raise ConfigError(name, "must be a mapping", lines.get(name))
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, v in value.items():
        path = f"{name}.{key}"
        if key not in fields:
            raise ConfigError(path, "unknown key", lines.get(path))
        nested = _NESTED.get((name, key))
        if nested is not None:
            kwargs[key] = _coerce(nested, path, v, raw, lines)
            continue
        default = fields[key].default
        if isinstance(v, list):
            v = tuple(tuple(x) if isinstance(x, list) else x for x in v)
        elif isinstance(default, float) and _is_int(v):
            v = float(v)
        if default is not dataclasses.MISSING and default is not None and not isinstance(v, type(default)):
            if not (isinstance(default, float) and isinstance(v, (int, float)) and not isinstance(v, bool)):
                raise ConfigError(path, f"expected {type(default).__name__}, got {type(v).__name__}", lines.get(path))
        if isinstance(v, float) and not math.isfinite(v):
            raise ConfigError(path, "must be finite", lines.get(path))
        kwargs[key] = v
    return cls(**kwargs)


def config_from_dict(data: dict | None, lines: dict[str, int] | None = None) -> RunConfig:
    lines = lines or {}
    data = data or {}
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a mapping")
    sections = {}
    for key, value in data.items():
        if key not in _SECTIONS:
            raise ConfigError(key, "unknown key", lines.get(key))
        sections[key] = _coerce(_SECTIONS[key], key, value or {}, data, lines)
    cfg = RunConfig(**sections)
    try:
        return cfg.validate()
    except ConfigError as e:
        if e.line is None and e.field in lines:
            raise ConfigError(e.field, str(e).split(": ", 1)[1], lines[e.field]) from None
        raise


def parse_config_text(text: str) -> RunConfig:
    try:
        data = yaml.safe_load(text)
        lines = _line_map(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigError("<file>", f"YAML syntax error: {e}", mark.line + 1 if mark else None) from None
    return config_from_dict(data, lines)


def preset_path(name: str) -> Path:
    return Path(str(resources.files("ricbox.presets").joinpath(f"{name}.yaml")))


def parse_config(source) -> RunConfig:
    """Load a config file, or a shipped preset by name ('desk', 'paper')."""
    if isinstance(source, str) and source in PRESETS:
        path = preset_path(source)
    else:
        path = Path(source)
    return parse_config_text(path.read_text())


def load_preset(name: str) -> RunConfig:
    if name not in PRESETS:
        raise ConfigError("<preset>", f"unknown preset {name!r}; choose from {PRESETS}")
    return parse_config(name)


def dump_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.to_dict(), sort_keys=False)
