import sys
from pathlib import Path

import numpy as np
import pytest

from rliff import Trajectory

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[number] = ("PASS" if rep.passed else "FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, text = _criteria[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {text}")


def make_trajectory(truth, rssi, pdr, aoa, scenario="rectangular"):
    return Trajectory.from_arrays("test", scenario, truth, rssi, pdr, aoa)


@pytest.fixture
def noisy_trajectory():
    """RSSI exact, PDR and AoA heavily corrupted."""
    rng = np.random.default_rng(7)
    n = 60
    s = np.linspace(0, 2 * np.pi, n)
    truth = np.column_stack([2 + np.cos(s), 2 + np.sin(s)])
    pdr = truth + rng.normal(0, 0.6, truth.shape)
    aoa = truth + rng.normal(0, 0.6, truth.shape)
    return make_trajectory(truth, truth.copy(), pdr, aoa)


@pytest.fixture
def perfect_trajectory():
    s = np.linspace(0, 3, 40)
    truth = np.column_stack([s, 0.5 * s])
    return make_trajectory(truth, truth.copy(), truth.copy(), truth.copy())
