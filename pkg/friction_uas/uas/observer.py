import math
from dataclasses import dataclass

import numpy as np

from ..model.dynamics import eval_B, eval_G, eval_H, solve_accelerations
from ..model.friction import DEFAULT_NORMAL_FORCE, stribeck_torque
from ..model.params import GeneralizedForces, State, perturb_state
from ..presets import ADAPTATION_SETUP, PARAMETER_NAMES, SIMULATION_PROTOCOL
from .nussbaum import nussbaum

# Layout of the stacked observer vector: q_hat (2), q_hat_dot (2), k (1), z_hat (10)
OBSERVER_SIZE = 15
K_INDEX = 4
Z_SLICE = slice(5, 15)


def _per_parameter(values):
    """
    Accepts a mapping keyed by parameter name, a sequence of ten values, or a scalar.
    """
    if isinstance(values, dict):
        missing = [name for name in PARAMETER_NAMES if name not in values]
        if missing:
            raise ValueError(f"missing parameters {missing}")
        return np.array([float(values[name]) for name in PARAMETER_NAMES])
    array = np.broadcast_to(np.asarray(values, dtype=float), (10,)).copy()
    return array


@dataclass(frozen=True, eq=False)
class AdaptationConfig:
    """
    Parameter adaptation and estimate-extraction settings.

    Attributes:
        z_l, z_u (numpy.ndarray): Steady-state lower and upper bounds of z1..z10.
        lambda_l, lambda_u (numpy.ndarray): Confidence in the bounds (1/s), strictly positive.
        gamma (float): Shared adaptation rate.
        threshold (float): Error-norm level (rad/s) below which estimates are extracted.
        averaging (bool): Average the estimates from the crossing until motion stops.
        dwell_time (float): Time (s) the error norm must stay below the threshold for a crossing.
        motion_threshold (float): Measured speed (rad/s) below which the pendulum is at rest;
            0 means motion is considered to last until the end of the record.
        k0 (float): Initial UAS gain, k(t0) > 0.
    """
    z_l: np.ndarray
    z_u: np.ndarray
    lambda_l: np.ndarray
    lambda_u: np.ndarray
    gamma: float = ADAPTATION_SETUP["gamma"]
    threshold: float = SIMULATION_PROTOCOL["threshold"]
    averaging: bool = SIMULATION_PROTOCOL["averaging"]
    dwell_time: float = 0.0
    motion_threshold: float = 0.0
    k0: float = ADAPTATION_SETUP["k0"]

    def __post_init__(self):
        for name in ("z_l", "z_u", "lambda_l", "lambda_u"):
            object.__setattr__(self, name, _per_parameter(getattr(self, name)))
        if np.any(self.lambda_l <= 0.0) or np.any(self.lambda_u <= 0.0):
            raise ValueError("bound confidences lambda_l and lambda_u must be strictly positive")
        if np.any(self.z_l > self.z_u):
            bad = [PARAMETER_NAMES[i] for i in np.flatnonzero(self.z_l > self.z_u)]
            raise ValueError(f"lower bounds exceed upper bounds for {bad}")
        if not self.threshold >= 0.0:
            raise ValueError(f"threshold must be non-negative, got {self.threshold}")
        if self.dwell_time < 0.0 or self.motion_threshold < 0.0:
            raise ValueError("dwell_time and motion_threshold must be non-negative")
        if not self.k0 >= 0.0:
            raise ValueError(f"k0 must be non-negative, got {self.k0}")

    @classmethod
    def from_table(cls, **overrides):
        """
        Builds the reference adaptation setup, replacing any given field.
        """
        values = {name: ADAPTATION_SETUP[name] for name in ("z_l", "z_u", "lambda_l", "lambda_u")}
        values.update(overrides)
        return cls(**values)

    @property
    def bounds(self):
        return list(zip(self.z_l, self.z_u))

    @property
    def steady_state(self):
        """
        Value every estimate approaches under a persistent non-zero error norm.
        """
        return ((self.gamma + self.lambda_u * self.z_u + self.lambda_l * self.z_l)
                / (self.lambda_u + self.lambda_l))


@dataclass(frozen=True, eq=False)
class ObserverState:
    """
    State of the high-gain adaptive observer.

    Attributes:
        q_hat (numpy.ndarray): Estimated joint angles (rad).
        q_hat_dot (numpy.ndarray): Estimated joint velocities (rad/s).
        k (float): UAS gain.
        z_hat (numpy.ndarray): Estimates of z1..z10.
    """
    q_hat: np.ndarray
    q_hat_dot: np.ndarray
    k: float
    z_hat: np.ndarray

    def to_vector(self):
        return np.concatenate([self.q_hat, self.q_hat_dot, [self.k], self.z_hat]).astype(float)

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (OBSERVER_SIZE,):
            raise ValueError(f"observer vector must have {OBSERVER_SIZE} entries, got {x.shape}")
        return cls(x[0:2].copy(), x[2:4].copy(), float(x[K_INDEX]), x[Z_SLICE].copy())

    @property
    def state(self):
        return State(self.q_hat[0], self.q_hat[1], self.q_hat_dot[0], self.q_hat_dot[1])


def uas_input(p, obs, e, spec):
    """
    Universal adaptive stabilizer input u = H(q_hat) N(k) e.

    Parameters:
    - p (PhysicalParams): Rig parameters.
    - obs (ObserverState): Current observer state.
    - e (array): Velocity error q_dot_measured - q_hat_dot (rad/s).
    - spec (NussbaumSpec): Nussbaum function selection.

    Returns:
    - GeneralizedForces: The UAS torques.
    """
    tau = _uas_torque(p, obs.q_hat, obs.k, np.asarray(e, dtype=float), spec)
    return GeneralizedForces(float(tau[0]), float(tau[1]))


def _uas_torque(p, q_hat, k, e, spec):
    H = eval_H(p, (q_hat[0], q_hat[1], 0.0, 0.0))
    return H @ (nussbaum(spec, k) * e)


def adapt_rhs(cfg, z_hat, e_norm):
    """
    Parameter adaptation law, applied element-wise to the ten estimates:
    z_dot = (gamma + lambda_u (z_u - z_hat) + lambda_l (z_l - z_hat)) * ||e||.

    Args:
        cfg (AdaptationConfig): Bounds, confidences and rate.
        z_hat (array): Current estimates.
        e_norm (float): Euclidean norm of the velocity error, >= 0.

    Returns:
        numpy.ndarray: Rates of the ten estimates.
    """
    if e_norm < 0.0:
        raise ValueError(f"the error norm must be non-negative, got {e_norm}")
    z_hat = np.asarray(z_hat, dtype=float)
    return (cfg.gamma + cfg.lambda_u * (cfg.z_u - z_hat) + cfg.lambda_l * (cfg.z_l - z_hat)) * e_norm


def lti_solution(cfg, z0, e_norm, t):
    """
    Closed-form response of the adaptation law to a constant error norm.

    With a constant ||e|| = c the law is a stable first-order LTI system with rate
    (lambda_u + lambda_l) c, so every estimate relaxes exponentially to `cfg.steady_state`.

    Args:
        cfg (AdaptationConfig): Adaptation settings.
        z0 (array): Estimates at t = 0.
        e_norm (float): Constant error norm.
        t (float or numpy.ndarray): Time(s) since the start.

    Returns:
        numpy.ndarray: Estimates at time t, shape (10,) or (len(t), 10).
    """
    z0 = np.asarray(z0, dtype=float)
    t = np.asarray(t, dtype=float)
    rate = (cfg.lambda_u + cfg.lambda_l) * e_norm
    decay = np.exp(-np.multiply.outer(t, rate))
    return cfg.steady_state + (z0 - cfg.steady_state) * decay


def estimated_friction(z_hat, omega, forces):
    """
    Friction torques of both joints evaluated with the current estimates.

    Args:
        z_hat (array): Estimates z1..z10.
        omega (array): Joint velocities at which friction is evaluated (rad/s).
        forces (tuple[float, float]): Normal forces of the two joints (N).

    Returns:
        numpy.ndarray: Estimated friction torques (N m), same sign convention as the model.
    """
    return np.array([
        stribeck_torque(*z_hat[0:5], omega[0], forces[0]),
        stribeck_torque(*z_hat[5:10], omega[1], forces[1]),
    ])


def observer_rhs(p, obs, measured, cfg, spec, normal_force=None, coriolis="consistent"):
    """
    Rate of the stacked observer state.

    The estimated pendulum follows the model with the current friction estimates
    and the UAS input, H(q_hat) q_hat_ddot = -Q_hat(q_hat_dot) + u - B - G, the gain
    integrates the squared error norm, and the estimates follow the adaptation law.

    Parameters:
    - p (PhysicalParams): Rig parameters (known).
    - obs (ObserverState or array): Current observer state.
    - measured (State or array): Measured state; only its velocities are used.
    - cfg (AdaptationConfig): Adaptation settings.
    - spec (NussbaumSpec): Nussbaum function selection.
    - normal_force (callable, optional): Normal force provider.
    - coriolis (str): Coriolis vector form.

    Returns:
    - numpy.ndarray: 15-element rate in the ObserverState vector layout.

    Raises:
    - SingularInertiaError: If H(q_hat) is singular.
    """
    x = obs.to_vector() if isinstance(obs, ObserverState) else np.asarray(obs, dtype=float)
    measured_velocity = (measured.as_array() if isinstance(measured, State)
                         else np.asarray(measured, dtype=float))[2:4]
    return _observer_rate(p, x, measured_velocity, cfg, spec,
                          normal_force or DEFAULT_NORMAL_FORCE, coriolis)


def _observer_rate(p, x, measured_velocity, cfg, spec, provider, coriolis):
    estimate = x[0:4]
    q_hat_dot = x[2:4]
    k = x[K_INDEX]
    z_hat = x[Z_SLICE]

    # Velocity error and its norm
    e = measured_velocity - q_hat_dot
    e_norm = math.hypot(e[0], e[1])

    H = eval_H(p, estimate)
    forces = (provider(p, estimate, 0), provider(p, estimate, 1))
    u = H @ (nussbaum(spec, k) * e)
    net = (-estimated_friction(z_hat, q_hat_dot, forces) + u
           - eval_B(p, estimate, coriolis) - eval_G(p, estimate))

    rate = np.empty(OBSERVER_SIZE)
    rate[0:2] = q_hat_dot
    rate[2:4] = solve_accelerations(H, net)
    rate[K_INDEX] = e_norm * e_norm
    rate[Z_SLICE] = adapt_rhs(cfg, z_hat, e_norm)
    return rate


def initial_guess_sample(cfg, seed):
    """
    Draws initial parameter estimates from Gaussians centred on the bound midpoints.

    The standard deviation is a sixth of the bound width so that the bounds sit at
    about three standard deviations; draws are clamped into the bounds.

    Args:
        cfg (AdaptationConfig): Bounds.
        seed (int): Seed of the draw.

    Returns:
        numpy.ndarray: Ten initial estimates.
    """
    rng = np.random.default_rng([seed, 2])
    midpoint = 0.5 * (cfg.z_l + cfg.z_u)
    spread = (cfg.z_u - cfg.z_l) / 6.0
    return np.clip(rng.normal(midpoint, spread), cfg.z_l, cfg.z_u)


def initial_observer_state(measured, cfg, seed, ic_sigma=0.0, z0=None):
    """
    Builds the observer initial condition for a measured trajectory.

    The estimated state starts at the first measured sample, perturbed with seeded
    noise of standard deviation `ic_sigma`; the gain starts at cfg.k0 and the
    estimates at `z0` or at a seeded draw from the bounds.

    Args:
        measured (Trajectory): Measurements.
        cfg (AdaptationConfig): Adaptation settings.
        seed (int): Seed for the perturbation and the draw.
        ic_sigma (float): Initial-condition noise in state units.
        z0 (array, optional): Explicit initial estimates.

    Returns:
        ObserverState: The initial observer state.
    """
    start = perturb_state(measured.state(0), ic_sigma, seed).as_array()
    z_hat = initial_guess_sample(cfg, seed) if z0 is None else _per_parameter(z0)
    return ObserverState(start[0:2], start[2:4], float(cfg.k0), z_hat)
