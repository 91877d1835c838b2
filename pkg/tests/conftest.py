import numpy as np
import pytest

from src.lab.curve import Circle, Ellipse, Lemniscate, RationalMapImage, sample_curve
from src.lab.rational import RationalFn


@pytest.fixture(scope="session")
def circle_spec():
    return Circle(0j, 1.0)


@pytest.fixture(scope="session")
def ellipse_spec():
    return Ellipse(2.0, 1.0)


@pytest.fixture(scope="session")
def lemniscate_spec():
    return Lemniscate((1.0, -1.0), 2.0)


@pytest.fixture(scope="session")
def rdomain_map():
    # phi(zeta) = zeta + 0.4 zeta^2
    return RationalFn.polynomial([0.0, 1.0, 0.4])


@pytest.fixture(scope="session")
def rdomain_spec(rdomain_map):
    return RationalMapImage(rdomain_map)


@pytest.fixture(scope="session")
def circle_sc(circle_spec):
    return sample_curve(circle_spec, 256)


@pytest.fixture(scope="session")
def ellipse_sc(ellipse_spec):
    return sample_curve(ellipse_spec, 256)


@pytest.fixture(scope="session")
def lemniscate_sc(lemniscate_spec):
    return sample_curve(lemniscate_spec, 256)


@pytest.fixture(scope="session")
def rdomain_sc(rdomain_spec):
    return sample_curve(rdomain_spec, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def cubic_map():
    # phi(zeta) = zeta + 0.2 zeta^2 + 0.05 zeta^3, univalent since Re phi' > 0 on the disk
    return RationalFn.polynomial([0.0, 1.0, 0.2, 0.05])
