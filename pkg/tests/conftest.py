from pathlib import Path

import pytest
from shapely.geometry import box

from sectorcover import geometry as geo

ROOT = Path(__file__).resolve().parents[1]
MAPS = ROOT / "maps"
GOLDEN = ROOT / "golden"

L_SHAPE = [(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)]


@pytest.fixture
def lshape():
    return geo.make_environment(L_SHAPE)


@pytest.fixture
def rect42():
    return geo.make_environment([(0, 0), (4, 0), (4, 2), (0, 2)])


@pytest.fixture
def unit_square():
    return box(0, 0, 1, 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
