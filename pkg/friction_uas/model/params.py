import math
from dataclasses import dataclass, fields

import numpy as np

from ..presets import PHYSICAL_PARAMETERS


@dataclass(frozen=True)
class PhysicalParams:
    """
    Rigid-body parameters of the tilted Furuta pendulum.

    Masses in kg, inertias in kg m^2, lengths in m, gravity in m/s^2 and the tilt
    of the base axis `phi` in radians. `phi = 0` is the classic untilted pendulum,
    which has no stable equilibrium for the arm; the configuration layer rejects it.
    """
    m1: float
    m2: float
    j1z: float
    j2x: float
    j2y: float
    j2z: float
    l1: float
    l2: float
    L1: float
    L2: float
    g: float
    phi: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value}")
            if f.name != "phi" and value <= 0.0:
                raise ValueError(f"{f.name} must be strictly positive, got {value}")
        if not 0.0 <= self.phi <= math.pi / 2:
            raise ValueError(f"phi must lie in [0, pi/2], got {self.phi}")

    @property
    def is_tilted(self):
        return self.phi > 0.0

    @classmethod
    def from_table(cls, phi, **overrides):
        """
        Builds the reference rig parameters with a given tilt.

        Args:
            phi (float): Tilt angle of the base axis in radians.
            **overrides: Any field to replace.

        Returns:
            PhysicalParams: The parameter set.
        """
        values = dict(PHYSICAL_PARAMETERS)
        values.update(overrides)
        return cls(phi=phi, **values)


@dataclass(frozen=True)
class FrictionParams:
    """
    Continuous friction model parameters of one joint.

    mu_d, mu_s: dynamic and static coefficients; mu_v: viscous coefficient (N m s/rad);
    theta_dot_t: transition angular velocity (rad/s); F_nt: transition force (N).
    The last two appear in denominators and must be strictly positive. The three
    coefficients may be zero so that a frictionless joint can be expressed.
    """
    mu_d: float
    mu_s: float
    mu_v: float
    theta_dot_t: float
    F_nt: float

    def __post_init__(self):
        for name in ("mu_d", "mu_s", "mu_v"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be finite and non-negative, got {value}")
        for name in ("theta_dot_t", "F_nt"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be finite and strictly positive, got {value}")

    def to_vector(self):
        return np.array([self.mu_d, self.mu_s, self.mu_v, self.theta_dot_t, self.F_nt])

    @classmethod
    def from_vector(cls, values):
        mu_d, mu_s, mu_v, theta_dot_t, F_nt = (float(v) for v in values)
        return cls(mu_d, mu_s, mu_v, theta_dot_t, F_nt)

    @classmethod
    def frictionless(cls):
        return cls(0.0, 0.0, 0.0, 1.0, 1.0)


def split_parameter_vector(z):
    """
    Splits a ten-element parameter vector into per-joint friction parameters.

    Args:
        z (sequence of float): z1..z10 in the shared parameter ordering.

    Returns:
        tuple[FrictionParams, FrictionParams]: Joint 0 and joint 1 parameters.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (10,):
        raise ValueError(f"expected 10 friction parameters, got shape {z.shape}")
    return FrictionParams.from_vector(z[:5]), FrictionParams.from_vector(z[5:])


def join_parameter_vector(fp0, fp1):
    return np.concatenate([fp0.to_vector(), fp1.to_vector()])


@dataclass(frozen=True)
class State:
    """
    Joint angles (rad) and angular velocities (rad/s).
    """
    theta0: float
    theta1: float
    omega0: float
    omega1: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in self.as_array()):
            raise ValueError(f"state values must be finite, got {self}")

    def as_array(self):
        return np.array([self.theta0, self.theta1, self.omega0, self.omega1], dtype=float)

    @classmethod
    def from_array(cls, x):
        return cls(*(float(v) for v in x))

    @classmethod
    def from_degrees(cls, theta0, theta1, omega0=0.0, omega1=0.0):
        return cls(*np.deg2rad([theta0, theta1, omega0, omega1]))


def perturb_state(state, sigma, seed):
    """
    Perturbs an initial condition with seeded Gaussian noise.

    The stream is independent of the measurement-noise stream that uses the same seed.

    Args:
        state (State): Initial condition.
        sigma (float): Standard deviation in state units.
        seed (int): Seed.

    Returns:
        State: The perturbed initial condition.
    """
    if sigma == 0.0:
        return state
    rng = np.random.default_rng([seed, 1])
    return State.from_array(state.as_array() + rng.normal(0.0, sigma, 4))

@dataclass(frozen=True)
class GeneralizedForces:
    """
    Generalized torques (N m) acting on the two joints.
    """
    tau0: float
    tau1: float

    def as_array(self):
        return np.array([self.tau0, self.tau1], dtype=float)

