import numpy as np
import pytest

from vacprop.materials import GOLD, ThermalPair
from vacprop.units import REFERENCE_UNITS


@pytest.fixture
def units():
    return REFERENCE_UNITS


@pytest.fixture
def gold():
    return GOLD


@pytest.fixture
def room(units):
    return units.temperature(300.0)


@pytest.fixture
def hot_pair(units):
    return ThermalPair.from_kelvin(300.0, 600.0, units)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


np.seterr(all="raise", under="ignore")


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Record the one-line verdict of an acceptance criterion for the end-of-run summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def add(line: str):
        lines.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
