"""Domain types and the weighted fusion arithmetic shared by the package."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

SCENARIOS = ("rectangular", "diagonal_a", "diagonal_b", "random")
# label used for trajectories ingested from CSV rather than simulated
REPLAY = "replay"

WEIGHT_MIN = -1.0
WEIGHT_MAX = 2.0


@dataclass(frozen=True)
class Position2D:
    """Planar position in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite position ({self.x}, {self.y})")

    def __add__(self, other: "Position2D") -> "Position2D":
        return Position2D(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Position2D") -> "Position2D":
        return Position2D(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class SyncedEstimates:
    """Ground truth plus the three tracker estimates at one timestamp."""

    t: int
    truth: Position2D
    rssi: Position2D
    pdr: Position2D
    aoa: Position2D

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"negative timestamp {self.t}")


@dataclass(frozen=True)
class WeightVector:
    """Fusion weights for the RSSI, PDR and AoA paths.

    Only the RSSI and AoA weights are stored; the PDR weight is whatever is
    left so that the three always sum to one. Individual weights may be
    negative or larger than one.
    """

    w_rssi: float
    w_aoa: float

    def __post_init__(self):
        if not (math.isfinite(self.w_rssi) and math.isfinite(self.w_aoa)):
            raise ValueError(f"non-finite weights ({self.w_rssi}, {self.w_aoa})")

    @property
    def w_pdr(self) -> float:
        return 1.0 - self.w_rssi - self.w_aoa

    @classmethod
    def from_triple(cls, w_rssi: float, w_pdr: float, w_aoa: float, tol: float = 1e-9) -> "WeightVector":
        if abs(w_rssi + w_pdr + w_aoa - 1.0) > tol:
            raise ValueError(f"weights sum to {w_rssi + w_pdr + w_aoa}, expected 1")
        return cls(w_rssi, w_aoa)

    def as_tuple(self) -> tuple[float, float, float]:
        """(w_rssi, w_pdr, w_aoa)"""
        return (self.w_rssi, self.w_pdr, self.w_aoa)

    def to_dict(self) -> dict:
        return {"w_rssi": self.w_rssi, "w_pdr": self.w_pdr, "w_aoa": self.w_aoa}


RSSI_ONLY = WeightVector(1.0, 0.0)
PDR_ONLY = WeightVector(0.0, 0.0)
AOA_ONLY = WeightVector(0.0, 1.0)


@dataclass(frozen=True)
class Trajectory:
    env_id: str
    scenario: str
    records: tuple[SyncedEstimates, ...]

    def __post_init__(self):
        if not self.records:
            raise ValueError("trajectory has no records")
        if self.scenario not in SCENARIOS and self.scenario != REPLAY:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        object.__setattr__(self, "records", tuple(self.records))
        for prev, cur in zip(self.records, self.records[1:]):
            if cur.t <= prev.t:
                raise ValueError(f"timestamps not strictly increasing at t={cur.t}")

    def __len__(self) -> int:
        return len(self.records)

    @classmethod
    def from_arrays(
        cls,
        env_id: str,
        scenario: str,
        truth: np.ndarray,
        rssi: np.ndarray,
        pdr: np.ndarray,
        aoa: np.ndarray,
        t: Optional[Sequence[int]] = None,
    ) -> "Trajectory":
        n = len(truth)
        if not (len(rssi) == len(pdr) == len(aoa) == n):
            raise ValueError("tracker paths and truth differ in length")
        ts = range(n) if t is None else t
        records = tuple(
            SyncedEstimates(
                int(k),
                Position2D(float(truth[i][0]), float(truth[i][1])),
                Position2D(float(rssi[i][0]), float(rssi[i][1])),
                Position2D(float(pdr[i][0]), float(pdr[i][1])),
                Position2D(float(aoa[i][0]), float(aoa[i][1])),
            )
            for i, k in enumerate(ts)
        )
        return cls(env_id, scenario, records)

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Column arrays: ``t`` of shape (n,), and (n, 2) arrays per path."""
        out = {"t": np.array([r.t for r in self.records], dtype=np.int64)}
        for name in ("truth", "rssi", "pdr", "aoa"):
            out[name] = np.array(
                [(getattr(r, name).x, getattr(r, name).y) for r in self.records], dtype=float
            )
        return out


@dataclass
class RunReport:
    """Outcome of one method on one trajectory."""

    env_id: str
    scenario: str
    method: str
    mse: float
    weights: Optional[WeightVector] = None
    episode_rewards: list = field(default_factory=list)
    episode_mses: list = field(default_factory=list)
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "env_id": self.env_id,
            "scenario": self.scenario,
            "method": self.method,
            "mse": self.mse,
            "weights": None if self.weights is None else self.weights.to_dict(),
            "episode_rewards": list(self.episode_rewards),
            "episode_mses": list(self.episode_mses),
            "seed": self.seed,
        }


def fuse(estimates: SyncedEstimates, w: WeightVector) -> Position2D:
    """Weighted combination of the three tracker estimates.

    Evaluated as pdr + w_rssi * (rssi - pdr) + w_aoa * (aoa - pdr), which is
    the same affine combination but returns a shared input point exactly.
    """
    r, p, a = estimates.rssi, estimates.pdr, estimates.aoa
    return Position2D(
        p.x + w.w_rssi * (r.x - p.x) + w.w_aoa * (a.x - p.x),
        p.y + w.w_rssi * (r.y - p.y) + w.w_aoa * (a.y - p.y),
    )


def tracking_error(estimates: SyncedEstimates, w: WeightVector) -> float:
    """Euclidean distance in meters between truth and the fused estimate."""
    t, r, p, a = estimates.truth, estimates.rssi, estimates.pdr, estimates.aoa
    # residual form, term for term what the learner evaluates
    return math.hypot(
        (p.x - t.x) + w.w_rssi * (r.x - p.x) + w.w_aoa * (a.x - p.x),
        (p.y - t.y) + w.w_rssi * (r.y - p.y) + w.w_aoa * (a.y - p.y),
    )
