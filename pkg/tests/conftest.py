import math

import numpy as np
import pytest

from friction_uas.model.params import PhysicalParams, State, split_parameter_vector
from friction_uas.presets import FRICTION_ACTUAL, FRICTION_INITIAL_GUESS, PARAMETER_NAMES
from friction_uas.sim.simulation import SimConfig, simulate
from friction_uas.sim.trajectory import Trajectory
from friction_uas.uas.nussbaum import NussbaumSpec
from friction_uas.uas.observer import AdaptationConfig

TILT_DEG = 30.0


def parameter_vector(table):
    return np.array([table[name] for name in PARAMETER_NAMES])


def make_trajectory(times, states):
    return Trajectory(np.asarray(times, dtype=float), np.asarray(states, dtype=float))


@pytest.fixture
def physical():
    return PhysicalParams.from_table(phi=math.radians(TILT_DEG))


@pytest.fixture
def truth():
    return split_parameter_vector(parameter_vector(FRICTION_ACTUAL))


@pytest.fixture
def truth_vector():
    return parameter_vector(FRICTION_ACTUAL)


@pytest.fixture
def initial_guess():
    return parameter_vector(FRICTION_INITIAL_GUESS)


@pytest.fixture
def adaptation():
    return AdaptationConfig.from_table()


@pytest.fixture
def spec():
    return NussbaumSpec()


@pytest.fixture
def release_state():
    # Both links at rest, pendulum released at 120 degrees
    return State.from_degrees(0.0, 120.0)


@pytest.fixture
def short_run(physical, truth, release_state):
    """
    A noise-free 0.3 s free swing with the reference friction.
    """
    fp0, fp1 = truth
    return simulate(physical, fp0, fp1, release_state, SimConfig(dt=1e-3, duration=0.3))
