import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SEPARATIONS = (0.5, 0.25, 0.125)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_psd(rng, n, trace=1.0):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = x @ x.conj().T
    return trace * s / np.trace(s).real


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
