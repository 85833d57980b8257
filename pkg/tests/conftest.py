import dataclasses
import sys

import numpy as np
import pytest
from hypothesis import settings

from ricbox.env.network import RanEnv, ScenarioConfig
from ricbox.harness.config import load_preset

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def desk_cfg():
    return load_preset("desk")


@pytest.fixture
def tiny_cfg(desk_cfg):
    """Desk scenario with short episodes and small nets for fast harness tests."""
    return dataclasses.replace(
        desk_cfg,
        agent=dataclasses.replace(desk_cfg.agent, hidden_width=16),
        schedule=dataclasses.replace(desk_cfg.schedule, slots_per_episode=20, episodes=4, seeds=(0, 1, 2)),
        io=dataclasses.replace(desk_cfg.io, checkpoint_every=2, scene_episodes=(0,)),
    )


@pytest.fixture
def env():
    e = RanEnv(ScenarioConfig())
    e.reset(7)
    return e


@pytest.fixture
def rng():
    return np.random.default_rng(1234)



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            ok, title, detail = results[n]
            terminalreporter.write_line(f"[{n}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
