import numpy as np
import pytest

from zeno_distill import FIG1, derive_kernel
from zeno_distill.oracle import projected_v_matrix

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def fig1_kernel():
    return derive_kernel(FIG1)


@pytest.fixture(scope="session")
def fig1_V():
    """Oracle kernel at the reference parameters, D = 80, order 64."""
    return projected_v_matrix(FIG1, 80, 64)


@pytest.fixture
def report():
    def _report(tag, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20091015)
