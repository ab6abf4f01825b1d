import numpy as np
import pytest

from mmaslinear import _backend

ACCEPTANCE_LINES = []


def record_acceptance(line):
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _available_backends():
    names = ["python"]
    try:
        _backend.load("cython")
        names.append("cython")
    except ImportError:
        pass
    return names


BACKENDS = _available_backends()


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return _backend.load(request.param)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240611))
