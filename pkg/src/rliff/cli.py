"""Command-line entry point: ``rliff simulate | train | reliability``.

Exit codes: 0 success, 1 runtime failure, 2 usage, config or input-schema error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import ConfigError, ExperimentConfig, load_config
from .core import REPLAY
from .csvio import SchemaError, atomic_write, read_trajectory_csv, write_trajectory_csv
from .evaluation import build_trajectory, run_on_trajectory, run_reliability

log = logging.getLogger("rliff")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _config_dict(cfg: ExperimentConfig) -> dict:
    return {
        "env": dataclasses.asdict(cfg.env),
        "scenario": cfg.scenario,
        "noise": dataclasses.asdict(cfg.noise),
        "learning": dataclasses.asdict(cfg.learning),
        "repetitions": cfg.repetitions,
        "seed": cfg.seed,
    }


def traces_path(out_path: str | Path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.stem + ".traces.csv")


def cmd_simulate(cfg: ExperimentConfig, out_path: str | Path) -> None:
    trajectory = build_trajectory(cfg.env, cfg.scenario, cfg.noise, cfg.seed)
    write_trajectory_csv(out_path, trajectory)
    log.info("wrote %d records to %s", len(trajectory), out_path)


def cmd_train(
    trajectory_csv: str | Path,
    cfg: ExperimentConfig,
    out_path: str | Path,
    env_id: str = REPLAY,
    scenario: str = REPLAY,
) -> dict:
    try:
        trajectory = read_trajectory_csv(trajectory_csv, env_id, scenario)
    except OSError as exc:
        raise SchemaError(f"cannot read trajectory {trajectory_csv}: {exc.strerror}") from None
    reports = run_on_trajectory(trajectory, cfg.learning, cfg.seed)
    result = {
        "config": {"learning": dataclasses.asdict(cfg.learning), "seed": cfg.seed},
        "env_id": trajectory.env_id,
        "scenario": trajectory.scenario,
        "n_records": len(trajectory),
        "reports": [r.to_dict() for r in reports],
    }
    atomic_write(out_path, _dump_json(result))
    rl = next(r for r in reports if r.method == "rl_iff")
    log.info("rl_iff mse %.6g with weights %s", rl.mse, rl.weights.to_dict())
    return result


def cmd_reliability(cfg: ExperimentConfig, out_path: str | Path) -> dict:
    if cfg.repetitions < 2:
        raise ConfigError(f"repetitions must be >= 2, got {cfg.repetitions}")
    report = run_reliability(cfg.env, cfg.scenario, cfg.noise, cfg.learning, cfg.repetitions)
    result = {
        "config": _config_dict(cfg),
        "env_id": cfg.env.env_id,
        "scenario": cfg.scenario,
        **report.to_dict(),
    }
    lines = ["method,repetition,seed,episode,reward,mse"]
    for method, reps in report.runs.items():
        for i, rep in enumerate(reps):
            for e, (r, m) in enumerate(zip(rep.episode_rewards, rep.episode_mses)):
                lines.append(f"{method},{i},{rep.seed},{e},{r},{m:.9g}")
    atomic_write(traces_path(out_path), "\n".join(lines) + "\n")
    atomic_write(out_path, _dump_json(result))
    for method, s in report.summary.items():
        log.info("%-7s mse mean %.5f std %.5f", method, s["mean"], s["std"])
    return result


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rliff", description="Q-learning fusion of RSSI, PDR and AoA tracks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value config file (defaults apply when omitted)")
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--seed", type=int, help="master seed, overrides the config")
        p.add_argument("--scenario", help="rectangular | diagonal_a | diagonal_b | random")
        p.add_argument("--env", help="env1 | env2 | env3")
        p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    common(sub.add_parser("simulate", help="write a simulated trajectory CSV"))
    p = sub.add_parser("train", help="train RL-IFF on a trajectory CSV and write a JSON report")
    p.add_argument("trajectory", help="trajectory CSV")
    common(p)
    common(sub.add_parser("reliability", help="multi-seed reliability study, JSON + traces CSV"))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    try:
        cfg = load_config(args.config).with_overrides(args.seed, args.scenario, args.env)
        if args.command == "simulate":
            cmd_simulate(cfg, args.out)
        elif args.command == "train":
            cmd_train(
                args.trajectory,
                cfg,
                args.out,
                env_id=args.env or REPLAY,
                scenario=args.scenario or REPLAY,
            )
        else:
            cmd_reliability(cfg, args.out)
    except (ConfigError, SchemaError) as exc:
        print(f"rliff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"rliff: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
