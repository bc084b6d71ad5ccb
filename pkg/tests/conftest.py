import importlib

import numpy as np
import pytest

from polycons import _pykernels

ACCEPTANCE_LINES: list[str] = []


def kernel_modules():
    mods = [pytest.param(_pykernels, id="python")]
    try:
        mods.append(pytest.param(importlib.import_module("polycons._ckernels"), id="cython"))
    except ImportError:
        mods.append(pytest.param(None, id="cython", marks=pytest.mark.skip("extension not built")))
    return mods


@pytest.fixture(params=kernel_modules())
def kernels(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
