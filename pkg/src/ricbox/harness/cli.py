"""Command-line entry point.

Exit codes: 0 ok, 1 a check failed, 2 config error, 3 numeric error, 4 I/O or decode error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from ricbox.errors import CheckpointError, ConfigError, NumericError
from ricbox.ric.wire import DecodeError

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


def _seeds(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cmd_train(args) -> int:
    from ricbox.harness.config import parse_config
    from ricbox.harness.run import train

    cfg = parse_config(args.config)
    res = train(cfg, args.seed, args.out, transport=args.transport)
    final = float(res.episode_rewards[-50:].mean())
    print(f"trained {cfg.agent.algorithm} seed={args.seed} episodes={len(res.rows)} "
          f"final_ma50={final:.6f} out={res.artifacts.out_dir}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    from ricbox.harness.config import parse_config
    from ricbox.harness.run import evaluate

    cfg = parse_config(args.config)
    summary = evaluate(args.checkpoint, cfg, args.episodes, args.seed, transport=args.transport)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _cmd_compare(args) -> int:
    from ricbox.harness.config import parse_config
    from ricbox.harness.run import compare

    cfg = parse_config(args.config)
    seeds = args.seeds if args.seeds is not None else list(cfg.schedule.seeds)
    rep = compare(cfg, seeds, args.out, workers=args.workers)
    for r in rep["runs"]:
        print(f"{r['algorithm']:>4} seed={r['seed']} final_ma50={r['final_ma50']:.4f} "
              f"plateau={r['plateau_episode']} last100_std={r['last100_std']:.4f} "
              f"baseline={r['baseline_mean']:.4f} beats_baseline={r['beats_baseline']}")
    for key in ("median_plateau_episode", "median_last100_std", "median_early_mean50", "seeds_beating_baseline"):
        print(f"{key}: {rep[key]}")
    for key in ("ppo_converges_faster", "ppo_more_stable", "a2c_better_early"):
        print(f"{key}: {rep[key]}")
    return EXIT_OK


def _cmd_replay(args) -> int:
    from ricbox.env.render import SceneLog
    from ricbox.harness.replay import REPLAY_FIELDS, kpi_scene, replay_rows
    from ricbox.ric.wire import IndicationMessage, iter_messages

    data = Path(args.file).read_bytes()
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(REPLAY_FIELDS)
    n = 0
    try:
        for row in replay_rows(data):
            if args.limit is not None and n >= args.limit:
                break
            out.writerow(row.cells())
            n += 1
        if args.scenes:
            with SceneLog(args.scenes) as log:
                for _, msg in iter_messages(data):
                    if isinstance(msg, IndicationMessage):
                        log.write(kpi_scene(msg))
    except DecodeError as e:
        sys.stdout.flush()
        print(f"error: decode failed at byte offset {e.offset}: {e.reason}", file=sys.stderr)
        return EXIT_IO
    print(f"{n} indications", file=sys.stderr)
    return EXIT_OK


def _cmd_grad_check(args) -> int:
    from ricbox.rlcore.gradcheck import sweep_random_networks

    reports = sweep_random_networks(args.networks, args.seed, args.tolerance)
    worst = max(reports, key=lambda r: r.max_rel_error)
    failed = sum(not r.passed for r in reports)
    print(f"networks={len(reports)} entries={sum(r.n_checked for r in reports)} "
          f"max_rel_error={worst.max_rel_error:.3e} tolerance={args.tolerance:g} failed={failed}")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


def _cmd_fuzz_codec(args) -> int:
    from ricbox.ric.fuzz import fuzz_codec

    rep = fuzz_codec(args.count, args.mutations, args.seed)
    print(f"roundtrips={rep.roundtrips} roundtrip_failures={rep.roundtrip_failures} mutations={rep.mutations} "
          f"rejected={rep.rejected} accepted={rep.accepted} crashes={rep.crashes}")
    return EXIT_OK if rep.ok else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ricbox", description="RAN simulator, actor-critic trainers and E2-style bus.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train one agent")
    t.add_argument("--config", required=True, help="YAML config file or preset name (desk, paper)")
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--out", help="run directory (default <io.output_dir>/<algorithm>_seed<N>)")
    t.add_argument("--transport", choices=("bus", "direct"), default="bus")
    t.set_defaults(fn=_cmd_train)

    e = sub.add_parser("evaluate", help="greedy evaluation of a checkpoint")
    e.add_argument("--checkpoint", required=True, help="actor .rlck file or a run directory")
    e.add_argument("--config", required=True)
    e.add_argument("--episodes", type=int, required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--transport", choices=("bus", "direct"), default="bus")
    e.set_defaults(fn=_cmd_evaluate)

    c = sub.add_parser("compare", help="train A2C and PPO on the same seeds")
    c.add_argument("--config", required=True)
    c.add_argument("--seeds", type=_seeds, help="comma-separated seeds (default: schedule.seeds)")
    c.add_argument("--out", help="output directory (default io.output_dir)")
    c.add_argument("--workers", type=int, help="parallel processes (default: one per CPU)")
    c.set_defaults(fn=_cmd_compare)

    r = sub.add_parser("replay", help="decode a KPI spill file")
    r.add_argument("--file", required=True)
    r.add_argument("--scenes", help="also write KPI scene records (JSON lines) here")
    r.add_argument("--limit", type=int, help="print at most this many rows")
    r.set_defaults(fn=_cmd_replay)

    g = sub.add_parser("grad-check", help="finite-difference check of backprop on random networks")
    g.add_argument("--networks", type=int, default=100)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tolerance", type=float, default=1e-4)
    g.set_defaults(fn=_cmd_grad_check)

    f = sub.add_parser("fuzz-codec", help="round-trip random messages and decode mutated bytes")
    f.add_argument("--count", type=int, default=10_000)
    f.add_argument("--mutations", type=int, help="mutated inputs (default count/10)")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(fn=_cmd_fuzz_codec)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, DecodeError, CheckpointError) as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
