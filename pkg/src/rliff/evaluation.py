"""Experiment harness: per-method MSE, learned weights, and multi-seed
reliability statistics.

Seeding: repetition ``i`` of a study with master seed ``s`` runs with seed
``s + i``. Inside a run, :func:`derive_seeds` splits that run seed into
independent streams for the ground truth, the tracker noise, the learner and
the random-weight baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import baselines
from .core import AOA_ONLY, PDR_ONLY, RSSI_ONLY, RunReport, Trajectory, WeightVector
from .fusion import LearningConfig, _ErrorModel, evaluate, rewards, train
from .sim import EnvironmentSpec, generate_trajectory
from .trackers import (
    TrackerNoiseConfig,
    simulate_aoa_path,
    simulate_pdr_path,
    simulate_rssi_path,
)

METHODS = ("aoa", "rssi", "pdr", "rl_iff", "random", "equal")
SELECTORS = {"aoa": AOA_ONLY, "rssi": RSSI_ONLY, "pdr": PDR_ONLY}


@dataclass(frozen=True)
class RunSeeds:
    truth: int
    noise: int
    learn: int
    baseline: int


def derive_seeds(seed: int) -> RunSeeds:
    truth, noise, learn, base = np.random.SeedSequence(seed).generate_state(4)
    return RunSeeds(int(truth), int(noise), int(learn), int(base))


def build_trajectory(
    env: EnvironmentSpec, scenario: str, noise_cfg: TrackerNoiseConfig, seed: int
) -> Trajectory:
    """Ground truth plus the three simulated tracker paths for one run seed."""
    seeds = derive_seeds(seed)
    truth = generate_trajectory(env, scenario, seeds.truth)
    cfg = replace(noise_cfg, seed=seeds.noise)
    return Trajectory.from_arrays(
        env.env_id,
        scenario,
        truth,
        simulate_rssi_path(truth, cfg),
        simulate_pdr_path(truth, cfg),
        simulate_aoa_path(truth, cfg),
    )


def run_policy(
    trajectory: Trajectory,
    draw_weights: Callable[[int], np.ndarray],
    episodes: int,
    method: str,
    seed: Optional[int] = None,
) -> RunReport:
    """Evaluate a non-learning weight policy.

    ``draw_weights(n)`` returns an (n, 2) array of (w_rssi, w_aoa), one row
    per timestamp, so the policy may change its weights at every step. Each
    episode is one pass over the trajectory. Rewards are summed over the same
    transitions the learner is scored on (every record after the first) and
    the reported MSE is the mean of the per-episode MSEs.
    """
    model = _ErrorModel(trajectory)
    n = len(trajectory)
    e0 = np.column_stack([model.e0x, model.e0y])
    e1 = np.column_stack([model.e1x, model.e1y])
    e2 = np.column_stack([model.e2x, model.e2y])
    first = 1 if n > 1 else 0
    episode_rewards, mses = [], []
    for _ in range(episodes):
        w = np.asarray(draw_weights(n), dtype=float)
        errs = np.hypot(*(e0 + w[:, :1] * e1 + w[:, 1:] * e2).T)
        episode_rewards.append(int(rewards(errs[first:]).sum()))
        mses.append(float(np.mean(errs**2)))
    return RunReport(
        env_id=trajectory.env_id,
        scenario=trajectory.scenario,
        method=method,
        mse=float(np.mean(mses)),
        episode_rewards=episode_rewards,
        episode_mses=mses,
        seed=seed,
    )


def random_policy(rng: np.random.Generator) -> Callable[[int], np.ndarray]:
    """Fresh random weights at every timestamp. One (n, 2) block yields the
    same weights as ``n`` successive :func:`baselines.random_weights` calls."""

    def draw(n: int) -> np.ndarray:
        return rng.random((n, 2))

    return draw


def constant_policy(w: WeightVector) -> Callable[[int], np.ndarray]:
    def draw(n: int) -> np.ndarray:
        return np.tile([w.w_rssi, w.w_aoa], (n, 1))

    return draw


def run_on_trajectory(trajectory: Trajectory, learn_cfg: LearningConfig, seed: int) -> list[RunReport]:
    """All six methods on one trajectory, in :data:`METHODS` order."""
    seeds = derive_seeds(seed)
    reports = [
        RunReport(
            trajectory.env_id,
            trajectory.scenario,
            name,
            evaluate(trajectory, w),
            weights=w,
            seed=seed,
        )
        for name, w in SELECTORS.items()
    ]
    _, _, rl = train(trajectory, replace(learn_cfg, seed=seeds.learn))
    rl.seed = seed
    reports.append(rl)

    rng = np.random.default_rng(seeds.baseline)
    reports.append(run_policy(trajectory, random_policy(rng), learn_cfg.episodes, "random", seed))
    # equal weights are deterministic, one pass stands in for every episode
    w_eq = baselines.equal_weights()
    eq = run_policy(trajectory, constant_policy(w_eq), 1, "equal", seed)
    eq.weights = w_eq
    eq.episode_rewards = eq.episode_rewards * learn_cfg.episodes
    eq.episode_mses = eq.episode_mses * learn_cfg.episodes
    reports.append(eq)
    return reports


def run_experiment(
    env: EnvironmentSpec,
    scenario: str,
    noise_cfg: TrackerNoiseConfig,
    learn_cfg: LearningConfig,
    seed: Optional[int] = None,
) -> list[RunReport]:
    """Simulate one (environment, scenario) cell and score every method.

    ``seed`` defaults to ``learn_cfg.seed``.
    """
    seed = learn_cfg.seed if seed is None else seed
    trajectory = build_trajectory(env, scenario, noise_cfg, seed)
    return run_on_trajectory(trajectory, learn_cfg, seed)


def stability(episode_rewards: Sequence[float], tail: float = 0.1) -> float:
    """Mean absolute change in cumulative reward between consecutive
    episodes over the final ``tail`` fraction of training."""
    r = np.asarray(episode_rewards, dtype=float)
    m = max(2, math.ceil(tail * len(r)))
    r = r[-m:]
    if len(r) < 2:
        return 0.0
    return float(np.mean(np.abs(np.diff(r))))


@dataclass
class ReliabilityReport:
    runs: dict[str, list[RunReport]]
    summary: dict[str, dict[str, float]] = field(default_factory=dict)
    stability: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for method, reps in self.runs.items():
            mse = np.array([r.mse for r in reps])
            self.summary[method] = {
                "mean": float(mse.mean()),
                "std": float(mse.std(ddof=1)) if len(mse) > 1 else 0.0,
                "min": float(mse.min()),
                "max": float(mse.max()),
            }
            if reps and reps[0].episode_rewards:
                self.stability[method] = float(np.mean([stability(r.episode_rewards) for r in reps]))

    @property
    def repetitions(self) -> int:
        return len(next(iter(self.runs.values())))

    def to_dict(self) -> dict:
        return {
            "repetitions": self.repetitions,
            "summary": self.summary,
            "stability": self.stability,
            "runs": {m: [r.to_dict() for r in reps] for m, reps in self.runs.items()},
        }


def run_reliability(
    env: EnvironmentSpec,
    scenario: str,
    noise_cfg: TrackerNoiseConfig,
    learn_cfg: LearningConfig,
    repetitions: int = 20,
    seeds: Optional[Sequence[int]] = None,
) -> ReliabilityReport:
    """Repeat :func:`run_experiment` over seeds ``learn_cfg.seed + i``.

    Passing ``seeds`` explicitly overrides the derivation (its length must
    equal ``repetitions``).
    """
    if repetitions < 2:
        raise ValueError(f"repetitions must be >= 2, got {repetitions}")
    if seeds is None:
        seeds = [learn_cfg.seed + i for i in range(repetitions)]
    elif len(seeds) != repetitions:
        raise ValueError("len(seeds) must equal repetitions")
    runs: dict[str, list[RunReport]] = {m: [] for m in METHODS}
    for s in seeds:
        for rep in run_experiment(env, scenario, noise_cfg, learn_cfg, seed=s):
            runs[rep.method].append(rep)
    return ReliabilityReport(runs)
