import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zetaflow import GroupData, synthesize


@pytest.fixture(scope="session")
def gd3():
    return GroupData(3)


@pytest.fixture(scope="session")
def gd5():
    return GroupData(5)


@pytest.fixture(scope="session")
def ls3():
    return synthesize(GroupData(3), 150, systole=0.5, seed=11)


@pytest.fixture(scope="session")
def ls3_twisted():
    return synthesize(GroupData(3), 100, systole=0.5, seed=12, dim_chi=2, chi_norm=1.2)


@pytest.fixture(scope="session")
def ls5():
    return synthesize(GroupData(5), 100, systole=0.6, seed=13)
