"""Reference weight policies that RL-IFF is compared against."""

import numpy as np

from .core import WeightVector


def random_weights(rng: np.random.Generator) -> WeightVector:
    """RSSI and AoA weights uniform in [0, 1]; PDR takes the remainder."""
    w_rssi, w_aoa = rng.random(2)
    return WeightVector(float(w_rssi), float(w_aoa))


def equal_weights() -> WeightVector:
    return WeightVector(1.0 / 3.0, 1.0 / 3.0)
