"""Parametric stand-ins for the RSSI, PDR and AoA tracking paths.

Each simulator maps a ground-truth path to an estimated path carrying that
sensor's typical error: white measurement noise smoothed by Bayesian filters
(RSSI), drift that accumulates with distance walked (PDR), and low noise with
occasional bias jumps from oscillator phase offsets (AoA).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# per-tracker stream tags mixed into the seed
_RSSI, _PDR, _AOA = 1, 2, 3

# std of the white acceleration driving the constant-velocity model, m/step
PROCESS_NOISE = 0.05


@dataclass(frozen=True)
class TrackerNoiseConfig:
    sigma_rssi: float = 0.4
    sigma_aoa: float = 0.15
    aoa_jump_prob: float = 0.02
    aoa_jump_scale: float = 0.10
    pdr_step_noise: float = 0.05
    pdr_heading_noise: float = math.radians(2.0)
    pdr_heading_drift: float = 0.015
    pf_particles: int = 300
    seed: int = 0

    def __post_init__(self):
        for name in (
            "sigma_rssi",
            "sigma_aoa",
            "aoa_jump_scale",
            "pdr_step_noise",
            "pdr_heading_noise",
            "pdr_heading_drift",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0 <= self.aoa_jump_prob <= 1:
            raise ValueError("aoa_jump_prob must be in [0, 1]")
        if self.pf_particles < 10:
            raise ValueError(f"pf_particles must be >= 10, got {self.pf_particles}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def rng(self, tag: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, tag])


NOISELESS = TrackerNoiseConfig(
    sigma_rssi=0.0,
    sigma_aoa=0.0,
    aoa_jump_prob=0.0,
    aoa_jump_scale=0.0,
    pdr_step_noise=0.0,
    pdr_heading_noise=0.0,
    pdr_heading_drift=0.0,
)


def _cv_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # state (x, y, vx, vy), unit time step
    F = np.eye(4)
    F[0, 2] = F[1, 3] = 1.0
    G = np.array([[0.5, 0.0], [0.0, 0.5], [1.0, 0.0], [0.0, 1.0]])
    Q = PROCESS_NOISE**2 * G @ G.T
    H = np.zeros((2, 4))
    H[0, 0] = H[1, 1] = 1.0
    return F, Q, H


def kalman_smooth(measurements: np.ndarray, sigma: float) -> np.ndarray:
    """Constant-velocity Kalman filter over 2-D position fixes."""
    F, Q, H = _cv_matrices()
    R = sigma**2 * np.eye(2)
    x = np.array([*measurements[0], 0.0, 0.0])
    P = np.diag([sigma**2, sigma**2, 1.0, 1.0])
    out = np.empty_like(measurements)
    out[0] = measurements[0]
    for k in range(1, len(measurements)):
        x = F @ x
        P = F @ P @ F.T + Q
        S = H @ P @ H.T + R
        K = np.linalg.solve(S, H @ P).T
        x = x + K @ (measurements[k] - H @ x)
        P = (np.eye(4) - K @ H) @ P
        if sigma == 0:
            # exact fixes: pin the position instead of trusting K == I to the last bit
            x[:2] = measurements[k]
        out[k] = x[:2]
    return out


def particle_smooth(
    measurements: np.ndarray, sigma: float, n_particles: int, rng: np.random.Generator
) -> np.ndarray:
    """Bootstrap particle filter, constant-velocity motion, multinomial
    resampling every step. Returns the posterior mean position."""
    if n_particles < 10:
        raise ValueError(f"need at least 10 particles, got {n_particles}")
    n = len(measurements)
    out = np.empty_like(measurements)
    parts = np.zeros((n_particles, 4))
    parts[:, :2] = measurements[0] + sigma * rng.standard_normal((n_particles, 2))
    parts[:, 2:] = PROCESS_NOISE * rng.standard_normal((n_particles, 2))
    out[0] = measurements[0] if sigma == 0 else parts[:, :2].mean(axis=0)
    for k in range(1, n):
        acc = PROCESS_NOISE * rng.standard_normal((n_particles, 2))
        parts[:, :2] += parts[:, 2:] + 0.5 * acc
        parts[:, 2:] += acc
        if sigma == 0:
            # exact fixes: the posterior collapses onto the measurement
            parts[:, :2] = measurements[k]
            out[k] = measurements[k]
            continue
        d2 = np.sum((parts[:, :2] - measurements[k]) ** 2, axis=1)
        logw = -0.5 * d2 / sigma**2
        wts = np.exp(logw - logw.max())
        wts /= wts.sum()
        out[k] = wts @ parts[:, :2]
        idx = rng.choice(n_particles, size=n_particles, p=wts)
        parts = parts[idx]
    return out


def _check_path(truth: np.ndarray, min_len: int) -> np.ndarray:
    truth = np.asarray(truth, dtype=float)
    if truth.ndim != 2 or truth.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array, got shape {truth.shape}")
    if len(truth) < min_len:
        raise ValueError(f"need at least {min_len} truth points, got {len(truth)}")
    return truth


def simulate_rssi_filters(truth: np.ndarray, cfg: TrackerNoiseConfig) -> tuple[np.ndarray, np.ndarray]:
    """Noisy RSSI fixes smoothed separately by the KF and the PF."""
    truth = _check_path(truth, 2)
    rng = cfg.rng(_RSSI)
    raw = truth + cfg.sigma_rssi * rng.standard_normal(truth.shape)
    kf = kalman_smooth(raw, cfg.sigma_rssi)
    pf = particle_smooth(raw, cfg.sigma_rssi, cfg.pf_particles, rng)
    return kf, pf


def simulate_rssi_path(truth: np.ndarray, cfg: TrackerNoiseConfig) -> np.ndarray:
    kf, pf = simulate_rssi_filters(truth, cfg)
    return 0.5 * (kf + pf)


def simulate_pdr_path(truth: np.ndarray, cfg: TrackerNoiseConfig) -> np.ndarray:
    """Dead reckoning from the true start point.

    Every true step is re-integrated with a multiplicative length error and a
    heading error made of per-step jitter plus a slowly wandering gyro bias,
    so the position error grows with distance walked.
    """
    truth = _check_path(truth, 2)
    rng = cfg.rng(_PDR)
    steps = np.diff(truth, axis=0)
    m = len(steps)
    scale = 1.0 + cfg.pdr_step_noise * rng.standard_normal(m)
    jitter = cfg.pdr_heading_noise * rng.standard_normal(m)
    drift = np.cumsum(cfg.pdr_heading_drift * rng.standard_normal(m))
    ang = jitter + drift
    c, s = np.cos(ang), np.sin(ang)
    dx = scale * (c * steps[:, 0] - s * steps[:, 1])
    dy = scale * (s * steps[:, 0] + c * steps[:, 1])
    out = np.empty_like(truth)
    out[0] = truth[0]
    out[1:, 0] = truth[0, 0] + np.cumsum(dx)
    out[1:, 1] = truth[0, 1] + np.cumsum(dy)
    if cfg.pdr_step_noise == 0 and cfg.pdr_heading_noise == 0 and cfg.pdr_heading_drift == 0:
        # skip the cumulative-sum round-off
        return truth.copy()
    return out


def simulate_aoa_path(truth: np.ndarray, cfg: TrackerNoiseConfig) -> np.ndarray:
    """Truth plus white noise plus a piecewise-constant bias that is redrawn
    with probability ``aoa_jump_prob`` at every step."""
    truth = _check_path(truth, 1)
    rng = cfg.rng(_AOA)
    n = len(truth)
    noise = cfg.sigma_aoa * rng.standard_normal((n, 2))
    jumps = rng.random(n) < cfg.aoa_jump_prob
    draws = cfg.aoa_jump_scale * rng.standard_normal((n, 2))
    bias = np.zeros((n, 2))
    current = np.zeros(2)
    for k in range(n):
        if jumps[k]:
            current = draws[k]
        bias[k] = current
    return truth + noise + bias
