import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from circuitfam import _accel

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def numpy_backend(monkeypatch):
    """Force the pure-numpy kernels for the duration of a test."""
    monkeypatch.setattr(_accel, "USE_NUMBA", False)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
