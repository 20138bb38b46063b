import pytest

from palg import make_bn
from palg import reports


@pytest.fixture(scope="session")
def bn():
    return {n: make_bn(n) for n in range(5)}


@pytest.fixture(scope="session")
def eps_w4():
    return reports.eps_w4()


@pytest.fixture(scope="session")
def free1():
    return reports.free_algebra(2, 1)


@pytest.fixture(scope="session")
def free32():
    return reports.free_algebra(3, 2)
