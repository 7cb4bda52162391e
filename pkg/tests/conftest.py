import numpy as np
import pytest

from rieszweak.constants import Params
from rieszweak.extremal import ExtremalFamily, extremal_profile
from rieszweak.radial import gaussian_profile, indicator_ball

SEED = 0

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(criterion, passed, detail=""):
    ACCEPTANCE[criterion] = (bool(passed), detail)
    return passed


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def p31():
    return Params(3, 1.0)


@pytest.fixture(scope="session")
def g31(p31):
    return extremal_profile(ExtremalFamily(), p31)


@pytest.fixture(scope="session")
def ball():
    return indicator_ball()


@pytest.fixture(scope="session")
def gauss():
    return gaussian_profile()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
