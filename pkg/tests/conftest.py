import numpy as np
import pytest

from rotshape.pulse import sigma_from_intensity_fwhm
from rotshape.rotor import ch3i, co2

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def sigma120():
    return sigma_from_intensity_fwhm(120.0)


@pytest.fixture(scope="session")
def ch3i_mol():
    return ch3i()


@pytest.fixture(scope="session")
def co2_mol():
    return co2()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
