"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
(see conftest.py), and asserts at the stated tolerance.  Criteria 4-7 share
one five-seed desk comparison.
"""

import dataclasses
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from ricbox.harness.config import load_preset
from ricbox.harness.replay import replay_rows
from ricbox.harness.run import compare, train
from ricbox.rlcore.checkpoint import load_checkpoint
from ricbox.rlcore.gradcheck import sweep_random_networks
from ricbox.agents.rollout import discounted_returns
from ricbox.ric.fuzz import fuzz_codec
from ricbox.ric.wire import decode, encode

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, tuple[bool, str, str]] = {}
FIXTURES = Path(__file__).parent / "fixtures"


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = (bool(ok), title, detail)
    print(f"[{n}] {'PASS' if ok else 'FAIL'} {title}: {detail}")


@pytest.fixture(scope="session")
def desk_compare(tmp_path_factory):
    cfg = load_preset("desk")
    t0 = time.perf_counter()
    rep = compare(cfg, list(cfg.schedule.seeds), tmp_path_factory.mktemp("desk_compare"))
    rep["elapsed_s"] = time.perf_counter() - t0
    return cfg, rep


def test_1_gradient_check():
    t0 = time.perf_counter()
    reports = sweep_random_networks(120, seed=2024, tolerance=1e-4, h=1e-5)
    dt = time.perf_counter() - t0
    worst = max(r.max_rel_error for r in reports)
    ok = len(reports) >= 100 and worst < 1e-4 and dt < 60
    record(1, "numeric core gradient check", ok,
           f"{len(reports)} networks, max rel error {worst:.2e} (< 1e-4), {dt:.1f} s (< 60 s)")
    assert ok


def test_2_returns_oracle():
    rng = np.random.default_rng(7)
    worst = 0.0
    n = 0
    for gamma in (0.5, 0.9, 1.0):
        for _ in range(1000):
            r = rng.uniform(-1.0, 1.0, int(rng.integers(1, 51)))
            oracle = [sum(r[k] * gamma ** (k - t) for k in range(t, len(r))) for t in range(len(r))]
            worst = max(worst, float(np.max(np.abs(discounted_returns(r, gamma) - oracle))))
            n += 1
    ok = worst <= 1e-12
    record(2, "discounted returns vs double-sum oracle", ok, f"{n} sequences, max abs error {worst:.1e} (<= 1e-12)")
    assert ok


def test_3_codec():
    t0 = time.perf_counter()
    rep = fuzz_codec(100_000, 10_000, seed=3)
    golden_ok = True
    for name in ("indication_1rec.bin", "control_1grant.bin", "indication_2rec.bin"):
        data = (FIXTURES / name).read_bytes()
        golden_ok &= encode(decode(data)) == data
    dt = time.perf_counter() - t0
    ok = rep.ok and golden_ok and dt < 60
    record(3, "codec fuzz, mutation and golden fixtures", ok,
           f"{rep.roundtrips} round-trips ({rep.roundtrip_failures} failures), {rep.mutations} mutations "
           f"({rep.rejected} rejected, {rep.accepted} valid, {rep.crashes} crashes), fixtures {golden_ok}, {dt:.1f} s")
    assert ok


def test_4_transport_transparency(desk_compare):
    cfg, rep = desk_compare
    seeds = list(cfg.schedule.seeds)[:3]
    mismatches = []
    for algo in ("a2c", "ppo"):
        for s in seeds:
            direct = train(cfg.with_algorithm(algo), s, transport="direct", write=False)
            if direct.rewards != rep["slot_rewards"][(algo, s)]:
                mismatches.append((algo, s))
    ok = not mismatches
    n_slots = cfg.schedule.episodes * cfg.schedule.slots_per_episode
    record(4, "bus vs direct reward sequences", ok,
           f"seeds {seeds} x (a2c, ppo), {n_slots} slots each, mismatches {mismatches or 'none'}")
    assert ok


def test_5_learning_beats_random(desk_compare):
    _, rep = desk_compare
    wins = rep["seeds_beating_baseline"]
    ok = all(wins[a] >= 4 for a in ("a2c", "ppo")) and rep["elapsed_s"] < 15 * 60
    finals = {a: [round(r["final_ma50"], 4) for r in rep["runs"] if r["algorithm"] == a] for a in ("a2c", "ppo")}
    record(5, "both algorithms beat random by >= 50%", ok,
           f"seeds beating baseline {wins} (need >= 4 of 5), final MA50 {finals}, "
           f"baseline {[round(r['baseline_mean'], 4) for r in rep['runs'][:5]]}, compare took {rep['elapsed_s']:.0f} s")
    assert ok


def test_6_ppo_converges_faster(desk_compare):
    _, rep = desk_compare
    med = rep["median_plateau_episode"]
    per = {a: [r["plateau_episode"] for r in rep["runs"] if r["algorithm"] == a] for a in ("a2c", "ppo")}
    ok = med["ppo"] < med["a2c"]
    record(6, "median episodes-to-90%-plateau PPO < A2C", ok,
           f"median {med}, per seed {per}; A2C better early: {rep['a2c_better_early']} "
           f"(early MA50 {rep['median_early_mean50']}, not gated)")
    assert ok


def test_7_ppo_more_stable(desk_compare):
    _, rep = desk_compare
    med = rep["median_last100_std"]
    per = {a: [round(r["last100_std"], 4) for r in rep["runs"] if r["algorithm"] == a] for a in ("a2c", "ppo")}
    ok = med["ppo"] < med["a2c"]
    record(7, "median last-100-episode reward std PPO < A2C", ok, f"median {med}, per seed {per}")
    assert ok


def test_8_invariant_suite():
    root = Path(__file__).resolve().parent.parent
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-m", "invariant", "-p", "no:cacheprovider", "tests"],
        cwd=root, capture_output=True, text=True,
    )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-300:]
    ok = proc.returncode == 0
    record(8, "invariant property suite", ok, tail)
    assert ok, proc.stdout[-3000:]


def test_9_paper_preset_smoke(tmp_path):
    base = load_preset("paper")
    cfg = dataclasses.replace(base, schedule=dataclasses.replace(base.schedule, episodes=2),
                              io=dataclasses.replace(base.io, checkpoint_every=1))
    t0 = time.perf_counter()
    res = train(cfg, 0, tmp_path)
    dt = time.perf_counter() - t0
    problems = []
    lines = (tmp_path / "metrics.csv").read_text().splitlines()
    if len(lines) != 3:
        problems.append(f"metrics rows {len(lines) - 1}")
    if not np.isfinite([float(x) for l in lines[1:] for x in l.split(",")]).all():
        problems.append("non-finite metric")
    actor = load_checkpoint(tmp_path / "final_actor.rlck")
    critic = load_checkpoint(tmp_path / "final_critic.rlck")
    if actor.sizes != (40, 384, 384, 384, 384, 51) or critic.sizes != (40, 384, 384, 384, 384, 1):
        problems.append(f"checkpoint shapes {actor.sizes} {critic.sizes}")
    rows = list(replay_rows((tmp_path / "kpi_spill.bin").read_bytes()))
    if len(rows) != 2 * (1000 + 1) or any(r.records != 2 * 10 + 2 * 5 + 2 for r in rows):
        problems.append(f"spill rows {len(rows)}")
    man = json.loads((tmp_path / "manifest.json").read_text())
    if man["config"]["scenario"]["n_bss"] != 5 or man["config"]["agent"]["gamma"] != 0.9:
        problems.append("manifest config")
    scenes = (tmp_path / "scenes.jsonl").read_text().splitlines()
    if len(scenes) != 2 * 1000:  # first and last episode are rendered
        problems.append(f"scene lines {len(scenes)}")
    ok = not problems
    record(9, "paper preset 2-episode smoke", ok,
           f"5 BS / 10 UE / 4x384 / 1000 slots, {dt:.1f} s, rewards {[round(r['mean_reward'], 4) for r in res.rows]}, "
           f"problems {problems or 'none'}")
    assert ok
