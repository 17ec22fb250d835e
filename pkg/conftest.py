"""Shared fixtures for the toolkit tests"""

import numpy as np
import pytest

from src.hardy.closed_forms import optimal_theta
from src.hardy.scenario import HardyScenario
from src.spin.algebra import SpinJ

SPINS = ['1/2', '1', '3/2', '2']


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=SPINS)
def spin(request):
    return SpinJ.parse(request.param)


@pytest.fixture
def generic_scenario(spin):
    """Scenario at angles with no special symmetry"""
    return HardyScenario.from_angles(spin, 1.1, 1.9, 0.4, 2.3)


@pytest.fixture
def optimal_scenario(spin):
    theta = optimal_theta(spin)
    return HardyScenario.from_angles(spin, theta, theta)
