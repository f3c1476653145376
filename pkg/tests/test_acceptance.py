"""Acceptance suite. Each test carries a ``criterion`` marker and the session
summary prints one PASS/FAIL line per criterion."""

import time
from decimal import Decimal

import numpy as np
import pytest

from oracles import reward_oracle, simplex_grid, state_oracle, value_iteration
from rliff import ENVIRONMENTS, LearningConfig, QTable, TrackerNoiseConfig, bellman_update
from rliff import discretize_state, reward
from rliff.cli import main, traces_path
from rliff.core import SCENARIOS
from rliff.evaluation import build_trajectory, run_experiment, run_on_trajectory, run_reliability
from rliff.fusion import apply_actions
from rliff.trackers import NOISELESS

MASTER_SEED = 0


@pytest.mark.criterion(1, "reward matches the literal oracle on the 0.01 grid plus 0.001 and 1.7")
def test_reward_conformance():
    start = time.perf_counter()
    grid = [0.0, 0.001] + [float(Decimal(i) / 100) for i in range(1, 100)] + [1.0, 1.7]
    mismatches = [e for e in grid if reward(e) != reward_oracle(e)]
    elapsed = time.perf_counter() - start
    assert not mismatches
    assert elapsed < 1.0


@pytest.mark.criterion(2, "discretize_state matches an independent oracle on a 10,000-point grid")
def test_state_conformance():
    # step 1/8000 hits every x.xx5 midpoint exactly
    grid = [i / 8000 for i in range(10_000)]
    assert discretize_state(0.0) == 0
    assert all(discretize_state(e) == 100 for e in grid if e >= 1)
    assert [discretize_state(e) for e in grid] == [state_oracle(e) for e in grid]


@pytest.mark.criterion(3, "1,000 random action sequences of 10,000 steps keep the weight sum at 1")
def test_weight_closure():
    start = time.perf_counter()
    rng = np.random.default_rng(MASTER_SEED)
    wr, wa = rng.random(1000), rng.random(1000)
    worst = 0.0
    for _ in range(10_000):
        wr, wa = apply_actions(wr, wa, rng.integers(1, 10, 1000), 0.1)
        wp = 1.0 - wr - wa
        worst = max(worst, float(np.max(np.abs(wr + wp + wa - 1.0))))
    elapsed = time.perf_counter() - start
    assert worst < 1e-9
    assert elapsed < 10.0


@pytest.mark.criterion(4, "Q-learning on a 3-state toy MDP reaches value iteration within 1e-6")
def test_bellman_correctness():
    T = [[1, 2], [2, 0], [0, 1]]
    R = [[0.0, 5.0], [1.0, -2.0], [3.0, 0.5]]
    q_star = value_iteration(T, R, 0.9)
    q = QTable(3, 2)
    rng = np.random.default_rng(MASTER_SEED)
    s = 0
    for _ in range(100_000):
        a = int(rng.integers(1, 3))
        s_next = T[s][a - 1]
        bellman_update(q, s, a, R[s][a - 1], s_next, 0.1, 0.9)
        s = s_next
    assert np.max(np.abs(q.values - q_star)) < 1e-6


@pytest.fixture(scope="session")
def sweep():
    """All 12 (environment, scenario) cells at the default configuration."""
    start = time.perf_counter()
    cells = {}
    for env_id, env in ENVIRONMENTS.items():
        for scenario in SCENARIOS:
            traj = build_trajectory(env, scenario, TrackerNoiseConfig(), MASTER_SEED)
            reports = run_on_trajectory(traj, LearningConfig(seed=MASTER_SEED), MASTER_SEED)
            cells[env_id, scenario] = {r.method: r.mse for r in reports}
            cells[env_id, scenario]["oracle"] = simplex_grid(traj)[0]
    return cells, time.perf_counter() - start


@pytest.mark.criterion(5, "RL-IFF beats every single path and is within 1.2x of the grid optimum in all 12 cells")
def test_fusion_optimality(sweep):
    cells, elapsed = sweep
    failures = []
    for cell, m in cells.items():
        print(cell, {k: round(v, 5) for k, v in m.items()})
        if not (m["rl_iff"] <= min(m["aoa"], m["rssi"], m["pdr"]) and m["rl_iff"] <= 1.2 * m["oracle"]):
            failures.append(cell)
    assert not failures
    assert elapsed < 300


@pytest.mark.criterion(6, "RL-IFF beats equal and random weights in at least 11 of 12 cells")
def test_baseline_ordering(sweep):
    cells, _ = sweep
    wins = sum(m["rl_iff"] < m["equal"] and m["rl_iff"] < m["random"] for m in cells.values())
    assert wins >= 11


@pytest.mark.criterion(7, "RL-IFF has lower cross-seed std and lower reward fluctuation than random weights")
def test_reliability():
    rep = run_reliability(
        ENVIRONMENTS["env1"], "rectangular", TrackerNoiseConfig(), LearningConfig(seed=MASTER_SEED), repetitions=20
    )
    print("std", rep.summary["rl_iff"]["std"], rep.summary["random"]["std"])
    print("stability", rep.stability["rl_iff"], rep.stability["random"])
    assert rep.summary["rl_iff"]["std"] < rep.summary["random"]["std"]
    assert rep.stability["rl_iff"] < rep.stability["random"]


@pytest.mark.criterion(8, "simulate, train and reliability give byte-identical output on rerun")
def test_determinism(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("env = env2\nscenario = random\nepisodes = 200\nrepetitions = 3\nseed = 5\n")
    outputs = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        assert main(["simulate", "--config", str(cfg), "--out", str(d / "t.csv")]) == 0
        assert main(["train", str(d / "t.csv"), "--config", str(cfg), "--out", str(d / "train.json")]) == 0
        assert main(["reliability", "--config", str(cfg), "--out", str(d / "rel.json")]) == 0
        files = [d / "t.csv", d / "train.json", d / "rel.json", traces_path(d / "rel.json")]
        outputs.append([f.read_bytes() for f in files])
    assert outputs[0] == outputs[1]


@pytest.mark.criterion(9, "noiseless trackers give MSE 0 for every method and reward 100 at every step")
@pytest.mark.parametrize("scenario", SCENARIOS)
def test_degenerate_correctness(scenario):
    for env in ENVIRONMENTS.values():
        reports = run_experiment(env, scenario, NOISELESS, LearningConfig(episodes=100, seed=MASTER_SEED))
        assert all(r.mse == 0.0 for r in reports)
        steps = env.n_steps - 1
        for r in reports:
            if r.episode_rewards:
                assert r.episode_rewards == [100 * steps] * 100
