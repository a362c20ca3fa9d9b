import math

import numpy as np
import pytest

from holonomic import frames, spherepaths

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def pi8_paths():
    return {
        "orange_slice": spherepaths.orange_slice(math.pi / 8),
        "three_arc": spherepaths.three_arc(math.pi / 4),
        "minimal_circle": spherepaths.minimal_circle(math.pi / 8),
    }


def make_frame(path, theta=math.pi / 3, varphi=math.pi / 7, two_qubit=False):
    params = frames.FrameParams(theta, varphi, path)
    return frames.two_qubit_frame(params) if two_qubit else frames.one_qubit_frame(params)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
