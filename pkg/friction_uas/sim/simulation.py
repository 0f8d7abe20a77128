import math
from dataclasses import dataclass

import numpy as np

from ..errors import SingularInertiaError
from ..model.dynamics import dynamics_rhs, mechanical_energy
from ..model.params import State
from ..utils import get_logger
from .integrator import rk4_step, sample_count
from .trajectory import Trajectory

logger = get_logger("sim")


@dataclass(frozen=True)
class SimConfig:
    """
    Fixed-step simulation and measurement settings.

    Attributes:
        dt (float): Integration and sampling step (s).
        duration (float): Simulated time span (s).
        seed (int): Seed of the measurement-noise stream.
        noise_sigma (float): Measurement noise standard deviation, in state units
            (rad, rad/s) unless `noise_in_degrees` is set.
        noise_enabled (bool): Whether `measure` corrupts the trajectory.
        noise_in_degrees (bool): Interpret both sigmas in degrees (deg, deg/s).
        ic_noise_sigma (float): Standard deviation of the observer initial-condition perturbation.
    """
    dt: float = 1e-3
    duration: float = 35.0
    seed: int = 0
    noise_sigma: float = 0.0
    noise_enabled: bool = False
    noise_in_degrees: bool = False
    ic_noise_sigma: float = 0.0

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.duration >= self.dt:
            raise ValueError(f"duration must be at least dt, got {self.duration}")
        if not (self.noise_sigma >= 0.0 and self.ic_noise_sigma >= 0.0):
            raise ValueError("noise standard deviations must be non-negative")

    def _in_state_units(self, sigma):
        return math.radians(sigma) if self.noise_in_degrees else sigma

    @property
    def noise_sigma_native(self):
        return self._in_state_units(self.noise_sigma)

    @property
    def ic_noise_sigma_native(self):
        return self._in_state_units(self.ic_noise_sigma)


def propagate(rhs, x0, dt, n_samples):
    """
    Integrates rhs(t, x) with fixed RK4 steps and records every sample.

    Args:
        rhs (callable): Time-dependent state derivative.
        x0 (array): Initial state.
        dt (float): Step size (s).
        n_samples (int): Number of recorded samples, including the initial one.

    Returns:
        tuple[numpy.ndarray, numpy.ndarray]: Times and the n_samples x len(x0) state history.
    """
    times = np.arange(n_samples) * dt
    states = np.empty((n_samples, len(x0)))
    states[0] = x0
    for i in range(n_samples - 1):
        try:
            states[i + 1] = rk4_step(rhs, states[i], dt, t=times[i])
        except SingularInertiaError as err:
            raise SingularInertiaError(f"t={times[i]:.6g} s: {err}") from err
    return times, states


def simulate(p, fp0, fp1, ic, cfg, input=None, normal_force=None, coriolis="consistent"):
    """
    Simulates the pendulum from an initial condition and records every step.

    Parameters:
    - p (PhysicalParams): Rig parameters.
    - fp0, fp1 (FrictionParams): Joint friction parameters.
    - ic (State): Initial condition.
    - cfg (SimConfig): Step and duration; noise settings are not used here (see `measure`).
    - input (callable, optional): Torque function input(t, state_array) -> GeneralizedForces.
      The passive plant is simulated when omitted.
    - normal_force (callable, optional): Normal force provider.
    - coriolis (str): Coriolis vector form, see model.eval_B.

    Returns:
    - Trajectory: floor(duration/dt) + 1 samples starting at t = 0.

    Raises:
    - NonFiniteStateError, SingularInertiaError: With the failing timestamp.
    """
    def rhs(t, x):
        u = input(t, x) if input is not None else None
        return dynamics_rhs(p, fp0, fp1, x, u, normal_force=normal_force, coriolis=coriolis)

    n_samples = sample_count(cfg.duration, cfg.dt)
    logger.debug("simulating %d samples at dt=%g s", n_samples, cfg.dt)
    times, states = propagate(rhs, _ic_array(ic), cfg.dt, n_samples)
    return Trajectory(times, states)


def _ic_array(ic):
    return ic.as_array() if isinstance(ic, State) else np.asarray(ic, dtype=float)


def add_noise(traj, sigma, seed):
    """
    Adds i.i.d. zero-mean Gaussian noise to every state channel of a trajectory.

    Args:
        traj (Trajectory): Clean trajectory.
        sigma (float): Standard deviation in state units (rad, rad/s).
        seed (int): Seed of the noise stream.

    Returns:
        Trajectory: A new, corrupted trajectory; an identical copy when sigma is 0.
    """
    if sigma < 0.0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0.0:
        return traj.copy_with_states(traj.states.copy())
    rng = np.random.default_rng(seed)
    return traj.copy_with_states(traj.states + rng.normal(0.0, sigma, traj.states.shape))


def measure(traj, cfg):
    """
    Turns a simulated trajectory into sensor measurements according to a SimConfig.

    Noise only corrupts the recorded samples; the plant integration is never fed back.
    """
    if not cfg.noise_enabled:
        return traj.copy_with_states(traj.states.copy())
    return add_noise(traj, cfg.noise_sigma_native, cfg.seed)


def energy_trace(p, traj):
    """
    Mechanical energy of every sample of a trajectory (J).
    """
    return np.array([mechanical_energy(p, x) for x in traj.states])


def resimulate(p, fp0, fp1, reference, normal_force=None, coriolis="consistent"):
    """
    Simulates the passive plant on the time grid of a reference trajectory.

    The run starts at the reference's first sample and uses its step and length, so a
    reference produced by `simulate` with the same parameters is reproduced bit for bit.

    Args:
        p (PhysicalParams): Rig parameters.
        fp0, fp1 (FrictionParams): Joint friction parameters.
        reference (Trajectory): Uniformly sampled trajectory supplying IC, step and length.
        normal_force (callable, optional): Normal force provider.
        coriolis (str): Coriolis vector form.

    Returns:
        Trajectory: The simulated trajectory on the reference times.
    """
    if len(reference) < 2:
        raise ValueError("a reference trajectory needs at least two samples")

    def rhs(t, x):
        return dynamics_rhs(p, fp0, fp1, x, normal_force=normal_force, coriolis=coriolis)

    _, states = propagate(rhs, reference.states[0], reference.dt, len(reference))
    return Trajectory(reference.times.copy(), states)
