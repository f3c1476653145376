"""Tabular Q-learning over fusion weights.

The agent observes the current fusion error (discretized to 101 levels),
nudges the RSSI and AoA weights up, down or not at all, and is rewarded in
inverse proportion to the new error. The PDR weight always absorbs the
remainder so the weights keep summing to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from .core import WEIGHT_MAX, WEIGHT_MIN, RunReport, Trajectory, WeightVector

N_STATES = 101
N_ACTIONS = 9
MAX_REWARD = 100
MIN_REWARD = -100
ZERO_NUDGE = 0.01

# action id -> direction applied to (w_rssi, w_aoa): +1 increase, -1 decrease, 0 keep
ACTIONS = {
    1: (1, 1),
    2: (1, -1),
    3: (1, 0),
    4: (-1, -1),
    5: (-1, 1),
    6: (-1, 0),
    7: (0, 1),
    8: (0, -1),
    9: (0, 0),
}


@dataclass(frozen=True)
class LearningConfig:
    gamma: float = 0.9
    alpha: float = 0.1
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay: float = 0.999
    step_pct: float = 0.10
    episodes: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0 < self.step_pct < 1:
            raise ValueError(f"step_pct must be in (0, 1), got {self.step_pct}")
        for name in ("epsilon_start", "epsilon_end", "epsilon_decay"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if self.episodes < 1:
            raise ValueError(f"episodes must be >= 1, got {self.episodes}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")

    def epsilon(self, episode: int) -> float:
        """Exploration probability for a given 0-based episode."""
        return max(self.epsilon_end, self.epsilon_start * self.epsilon_decay**episode)


class QTable:
    """Dense state x action value table; actions are addressed 1-based."""

    def __init__(self, n_states: int = N_STATES, n_actions: int = N_ACTIONS):
        self.values = np.zeros((n_states, n_actions))
        self.visit_counts = np.zeros((n_states, n_actions), dtype=np.int64)

    @property
    def n_states(self) -> int:
        return self.values.shape[0]

    @property
    def n_actions(self) -> int:
        return self.values.shape[1]

    def __getitem__(self, key):
        s, a = key
        return self.values[s, a - 1]

    def greedy(self, s: int) -> int:
        # np.argmax returns the first maximum, i.e. the lowest action id
        return int(np.argmax(self.values[s])) + 1

    def copy(self) -> "QTable":
        q = QTable(self.n_states, self.n_actions)
        q.values[...] = self.values
        q.visit_counts[...] = self.visit_counts
        return q


def _check_error(epsilon_k: float) -> None:
    if math.isnan(epsilon_k) or epsilon_k < 0 or math.isinf(epsilon_k):
        raise ValueError(f"error must be finite and non-negative, got {epsilon_k}")


def _percent_index(epsilon_k: float) -> int:
    """round(100 * epsilon_k), halves away from zero.

    Float products land just below a half for inputs like 0.285, so values
    within 1e-9 of a tie are resolved on the decimal representation.
    """
    x = epsilon_k * 100.0
    frac = x - math.floor(x)
    if abs(frac - 0.5) < 1e-9:
        return int((Decimal(repr(epsilon_k)) * 100).quantize(Decimal(1), rounding=ROUND_HALF_UP))
    return int(math.floor(x + 0.5))


def discretize_state(epsilon_k: float) -> int:
    """Map a fusion error in meters to a state index in 0..100."""
    _check_error(epsilon_k)
    if epsilon_k >= 1.0:
        return N_STATES - 1
    return min(_percent_index(epsilon_k), N_STATES - 1)


def reward(epsilon_k: float) -> int:
    _check_error(epsilon_k)
    if epsilon_k == 0.0:
        return MAX_REWARD
    if epsilon_k >= 1.0:
        return MIN_REWARD
    # round(epsilon, 2) == pct / 100; floored at 0.01 so the reward caps at 100
    pct = max(_percent_index(epsilon_k), 1)
    # round(100 / pct) with halves up, in exact integer arithmetic
    return (200 + pct) // (2 * pct)


def rewards(errors: np.ndarray) -> np.ndarray:
    """Vectorized :func:`reward`; element-for-element identical to it."""
    e = np.asarray(errors, dtype=float)
    if np.any(~np.isfinite(e)) or np.any(e < 0):
        raise ValueError("errors must be finite and non-negative")
    x = e * 100.0
    pct = np.maximum(np.floor(x + 0.5), 1.0).astype(np.int64)
    out = (200 + pct) // (2 * pct)
    out[e >= 1.0] = MIN_REWARD
    out[e == 0.0] = MAX_REWARD
    near_tie = np.abs(x - np.floor(x) - 0.5) < 1e-9
    for i in np.flatnonzero(near_tie):
        out[i] = reward(float(e[i]))
    return out


def _step(value: float, direction: int, step_pct: float) -> float:
    if direction == 0:
        return value
    if abs(value) < ZERO_NUDGE:
        # scaling alone never leaves zero and shrinks small weights
        # geometrically, so weights near zero move additively instead
        value += direction * ZERO_NUDGE
    else:
        value *= 1.0 + direction * step_pct
    return min(max(value, WEIGHT_MIN), WEIGHT_MAX)


def apply_action(w: WeightVector, a: int, step_pct: float) -> WeightVector:
    """Scale the RSSI and/or AoA weight by (1 +- step_pct) per the action id."""
    d_rssi, d_aoa = ACTIONS[a]
    return WeightVector(_step(w.w_rssi, d_rssi, step_pct), _step(w.w_aoa, d_aoa, step_pct))


_DIRECTIONS = np.array([ACTIONS[a] for a in range(1, N_ACTIONS + 1)], dtype=float)


def apply_actions(
    w_rssi: np.ndarray, w_aoa: np.ndarray, actions: np.ndarray, step_pct: float
) -> tuple[np.ndarray, np.ndarray]:
    """Batched :func:`apply_action`: row ``i`` of the weights takes
    ``actions[i]``. Returns new (w_rssi, w_aoa) arrays with identical
    rounding to the scalar version."""
    d = _DIRECTIONS[np.asarray(actions) - 1]
    return _steps(np.asarray(w_rssi, float), d[:, 0], step_pct), _steps(np.asarray(w_aoa, float), d[:, 1], step_pct)


def _steps(value: np.ndarray, direction: np.ndarray, step_pct: float) -> np.ndarray:
    out = np.where(
        np.abs(value) < ZERO_NUDGE,
        value + direction * ZERO_NUDGE,
        value * (1.0 + direction * step_pct),
    )
    out = np.where(direction == 0, value, out)
    return np.minimum(np.maximum(out, WEIGHT_MIN), WEIGHT_MAX)


def select_action(q: QTable, s: int, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy choice; exactly one uniform draw per call plus one
    integer draw when exploring."""
    if not 0 <= s < q.n_states:
        raise IndexError(f"state {s} out of range")
    if rng.random() < epsilon:
        return int(rng.integers(1, q.n_actions + 1))
    return q.greedy(s)


def bellman_update(
    q: QTable, s: int, a: int, r: float, s_next: int, alpha: float, gamma: float
) -> QTable:
    """One Q-learning step. Updates ``q`` in place and returns it."""
    target = r + gamma * q.values[s_next].max()
    q.values[s, a - 1] += alpha * (target - q.values[s, a - 1])
    q.visit_counts[s, a - 1] += 1
    return q


def evaluate(trajectory: Trajectory, w: WeightVector) -> float:
    """Mean squared fusion error over the trajectory with fixed weights."""
    arr = trajectory.arrays
    pdr = arr["pdr"]
    fused = pdr + w.w_rssi * (arr["rssi"] - pdr) + w.w_aoa * (arr["aoa"] - pdr)
    return float(np.mean(np.sum((arr["truth"] - fused) ** 2, axis=1)))


class _ErrorModel:
    """Per-timestamp residual terms with the PDR weight eliminated.

    truth - fused = -(e0 + w_rssi * e1 + w_aoa * e2), so both the per-step
    error and the whole-trajectory MSE are cheap closed forms in the two
    free weights.
    """

    def __init__(self, trajectory: Trajectory):
        arr = trajectory.arrays
        e0 = arr["pdr"] - arr["truth"]
        e1 = arr["rssi"] - arr["pdr"]
        e2 = arr["aoa"] - arr["pdr"]
        # error_k is built term for term like core.tracking_error
        self.e0x, self.e0y = e0[:, 0].tolist(), e0[:, 1].tolist()
        self.e1x, self.e1y = e1[:, 0].tolist(), e1[:, 1].tolist()
        self.e2x, self.e2y = e2[:, 0].tolist(), e2[:, 1].tolist()

        def dot(a, b):
            return float(np.mean(np.sum(a * b, axis=1)))

        self.c00, self.c11, self.c22 = dot(e0, e0), dot(e1, e1), dot(e2, e2)
        self.c01, self.c02, self.c12 = dot(e0, e1), dot(e0, e2), dot(e1, e2)

    def error(self, k: int, wr: float, wa: float) -> float:
        return math.hypot(
            self.e0x[k] + wr * self.e1x[k] + wa * self.e2x[k],
            self.e0y[k] + wr * self.e1y[k] + wa * self.e2y[k],
        )

    def mse(self, wr: float, wa: float) -> float:
        return max(
            0.0,
            self.c00
            + wr * wr * self.c11
            + wa * wa * self.c22
            + 2.0 * (wr * self.c01 + wa * self.c02 + wr * wa * self.c12),
        )


def train(trajectory: Trajectory, cfg: LearningConfig) -> tuple[WeightVector, QTable, RunReport]:
    """Learn fusion weights on one trajectory.

    Each episode is one pass over the trajectory in timestamp order. The
    weights are drawn once at random and then carried across episodes. At
    every step the agent picks an action in the current error state, applies
    it, measures the error of the new weights at the next timestamp, and
    updates the table.

    Random numbers: two uniforms for the initial (w_rssi, w_aoa), then per
    episode one block of exploration uniforms followed by one block of
    exploratory action ids, one entry per step.

    Returns the weights with the lowest whole-trajectory MSE among all
    weights visited during training, the final table, and a report holding
    the per-episode cumulative reward and end-of-episode MSE.
    """
    n = len(trajectory)
    if n == 0:
        raise ValueError("empty trajectory")
    model = _ErrorModel(trajectory)
    rng = np.random.default_rng(cfg.seed)
    q = QTable()
    # plain lists are several times faster than numpy scalar indexing here
    values = q.values.tolist()
    visits = q.visit_counts.tolist()
    alpha, gamma, step_pct = cfg.alpha, cfg.gamma, cfg.step_pct
    e0x, e0y, e1x, e1y, e2x, e2y = model.e0x, model.e0y, model.e1x, model.e1y, model.e2x, model.e2y

    wr, wa = (float(v) for v in rng.random(2))
    best = (wr, wa)
    best_mse = model.mse(wr, wa)
    # a single-record trajectory still yields one transition per episode
    steps = list(range(1, n)) if n > 1 else [0]
    m = len(steps)

    episode_rewards: list[int] = []
    episode_mses: list[float] = []
    for episode in range(cfg.episodes):
        eps = cfg.epsilon(episode)
        explore = rng.random(m).tolist()
        random_actions = rng.integers(1, N_ACTIONS + 1, m).tolist()
        s = discretize_state(model.error(0, wr, wa))
        total = 0
        for i, k in enumerate(steps):
            row = values[s]
            if explore[i] < eps:
                a = random_actions[i]
            else:
                a = row.index(max(row)) + 1
            d_rssi, d_aoa = ACTIONS[a]
            wr = _step(wr, d_rssi, step_pct)
            wa = _step(wa, d_aoa, step_pct)
            err = math.hypot(e0x[k] + wr * e1x[k] + wa * e2x[k], e0y[k] + wr * e1y[k] + wa * e2y[k])
            if not math.isfinite(err):
                raise FloatingPointError(f"non-finite fused estimate at t={trajectory.records[k].t}")
            r = reward(err)
            s_next = discretize_state(err)
            row[a - 1] += alpha * (r + gamma * max(values[s_next]) - row[a - 1])
            visits[s][a - 1] += 1
            total += r
            s = s_next
            cur = model.mse(wr, wa)
            if cur < best_mse:
                best, best_mse = (wr, wa), cur
        episode_rewards.append(total)
        episode_mses.append(model.mse(wr, wa))

    q.values[...] = values
    q.visit_counts[...] = visits
    best_w = WeightVector(*best)
    report = RunReport(
        env_id=trajectory.env_id,
        scenario=trajectory.scenario,
        method="rl_iff",
        mse=evaluate(trajectory, best_w),
        weights=best_w,
        episode_rewards=episode_rewards,
        episode_mses=episode_mses,
        seed=cfg.seed,
    )
    return best_w, q, report
