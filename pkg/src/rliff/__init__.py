"""RL-IFF: tabular Q-learning of fusion weights for RSSI, PDR and AoA
indoor tracking paths."""

from .baselines import equal_weights, random_weights
from .core import (
    Position2D,
    RunReport,
    SyncedEstimates,
    Trajectory,
    WeightVector,
    fuse,
    tracking_error,
)
from .evaluation import ReliabilityReport, run_experiment, run_reliability
from .fusion import (
    LearningConfig,
    QTable,
    apply_action,
    apply_actions,
    bellman_update,
    discretize_state,
    evaluate,
    reward,
    select_action,
    train,
)
from .sim import ENVIRONMENTS, EnvironmentSpec, generate_trajectory
from .trackers import (
    TrackerNoiseConfig,
    simulate_aoa_path,
    simulate_pdr_path,
    simulate_rssi_path,
)

__version__ = "0.1.0"
