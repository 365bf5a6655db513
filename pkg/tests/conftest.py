import os
import sys

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

from netprep.dataset import Dataset  # noqa: E402


@pytest.fixture
def tiny():
    return Dataset.from_dict(
        {
            "duration": [0.0, 2.0, 0.0, 5.0],
            "protocol_type": ["tcp", "udp", "tcp", "icmp"],
            "src_bytes": [491.0, 146.0, 0.0, 232.0],
            "service": ["http", "private", "http", "ecr_i"],
        },
        labels=["normal", "anomaly", "normal", "neptune"],
        name="tiny",
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
