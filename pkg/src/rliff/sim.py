"""Ground-truth walking trajectories inside a rectangular room."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SCENARIOS


@dataclass(frozen=True)
class EnvironmentSpec:
    env_id: str
    width: float
    height: float
    speed: float
    n_steps: int = 200

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("room dimensions must be positive")
        if self.n_steps < 10:
            raise ValueError(f"n_steps must be >= 10, got {self.n_steps}")
        if not 0 < self.speed < min(self.width, self.height):
            raise ValueError(f"speed must be in (0, {min(self.width, self.height)})")


ENVIRONMENTS = {
    "env1": EnvironmentSpec("env1", 5.0, 5.0, 0.15),
    "env2": EnvironmentSpec("env2", 8.0, 6.0, 0.20),
    "env3": EnvironmentSpec("env3", 10.0, 8.0, 0.25),
}

# heading change std per step for the random walk, radians
RANDOM_TURN_STD = 0.3


def _perimeter_point(s: float, w: float, h: float) -> tuple[float, float]:
    # counter-clockwise from (0, 0)
    s = s % (2 * (w + h))
    if s < w:
        return s, 0.0
    s -= w
    if s < h:
        return w, s
    s -= h
    if s < w:
        return w - s, h
    return 0.0, h - (s - w)


def _shuttle(start, end, n: int, speed: float) -> np.ndarray:
    start, end = np.asarray(start, float), np.asarray(end, float)
    length = float(np.linalg.norm(end - start))
    s = np.arange(n) * speed
    # triangle wave in [0, length]
    phase = np.mod(s, 2 * length)
    along = np.where(phase <= length, phase, 2 * length - phase)
    return start + np.outer(along / length, end - start)


def _reflect(v: float, hi: float) -> float:
    period = 2 * hi
    v = v % period
    return period - v if v > hi else v


def _random_walk(env: EnvironmentSpec, rng: np.random.Generator) -> np.ndarray:
    pts = np.empty((env.n_steps, 2))
    x, y = env.width / 2, env.height / 2
    heading = rng.uniform(-math.pi, math.pi)
    turns = rng.normal(0.0, RANDOM_TURN_STD, env.n_steps)
    for k in range(env.n_steps):
        pts[k] = x, y
        heading += turns[k]
        nx = x + env.speed * math.cos(heading)
        ny = y + env.speed * math.sin(heading)
        # mirror off the walls and turn the walker around accordingly
        if not 0 <= nx <= env.width:
            heading = math.pi - heading
        if not 0 <= ny <= env.height:
            heading = -heading
        x, y = _reflect(nx, env.width), _reflect(ny, env.height)
    return pts


def generate_trajectory(env: EnvironmentSpec, scenario: str, seed: int = 0) -> np.ndarray:
    """Return an (n_steps, 2) array of ground-truth positions.

    ``rectangular`` walks the room perimeter, ``diagonal_a`` shuttles between
    (0, 0) and (width, height), ``diagonal_b`` between (width, 0) and
    (0, height), and ``random`` is a seeded random walk reflected at the walls.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    w, h, n = env.width, env.height, env.n_steps
    if scenario == "rectangular":
        return np.array([_perimeter_point(k * env.speed, w, h) for k in range(n)])
    if scenario == "diagonal_a":
        return _shuttle((0.0, 0.0), (w, h), n, env.speed)
    if scenario == "diagonal_b":
        return _shuttle((w, 0.0), (0.0, h), n, env.speed)
    return _random_walk(env, np.random.default_rng(seed))
