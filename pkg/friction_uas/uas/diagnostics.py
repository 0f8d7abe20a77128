"""
Post-hoc check of the conditions under which vanishing observer error implies
parameter convergence.

Once the error norm is near zero the friction mismatch between the plant and the
observer can be written as A(t) x = 0 with x = (1, 1, 1, 1). The estimates are only
pinned to the true parameters when A is non-zero, x is not in its nullspace and the
tanh factors of the friction model are saturated. None of this gates identification;
it tells the user whether an extraction window is trustworthy.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..model.friction import DEFAULT_NORMAL_FORCE


def _rational(force, coefficient, ratio):
    return force * coefficient * ratio / (0.25 * ratio * ratio + 0.75)


def _joint_row(truth, z, omega, force):
    # z holds (mu_d, mu_s, mu_v, theta_dot_t, F_nt) estimates of one joint
    mu_d, mu_s, mu_v, theta_dot_t, F_nt = truth.mu_d, truth.mu_s, truth.mu_v, truth.theta_dot_t, truth.F_nt
    z_d, z_s, z_v, z_t, z_nt = z
    ratio = omega / theta_dot_t
    ratio_hat = omega / z_t
    a = force * mu_d * math.tanh(4.0 * ratio) - force * z_d * math.tanh(4.0 * ratio_hat)
    b = mu_v * omega * math.tanh(4.0 * force / F_nt) - z_v * omega * math.tanh(4.0 * force / z_nt)
    c = _rational(force, mu_s, ratio) - _rational(force, z_s, ratio_hat)
    d = _rational(force, mu_d, ratio) - _rational(force, z_d, ratio_hat)
    return [a, b, c, d]


def condition_matrix(truth0, truth1, z_hat, omega, forces):
    """
    Builds the 2 x 4 mismatch matrix between the true and the estimated friction terms.

    Columns hold the dynamic (tanh), viscous, static-rational and dynamic-rational
    differences; rows are the two joints.

    Args:
        truth0, truth1 (FrictionParams): Reference parameters, e.g. a previous estimate.
        z_hat (array): Estimates z1..z10.
        omega (array): Joint velocities (rad/s).
        forces (tuple[float, float]): Normal forces (N).

    Returns:
        numpy.ndarray: The 2 x 4 matrix.
    """
    z_hat = np.asarray(z_hat, dtype=float)
    return np.array([
        _joint_row(truth0, z_hat[0:5], omega[0], forces[0]),
        _joint_row(truth1, z_hat[5:10], omega[1], forces[1]),
    ])


def condition_holds(A, tol=1e-12):
    """
    True when A is non-zero and (1, 1, 1, 1) is not in its nullspace.
    """
    A = np.asarray(A, dtype=float)
    return bool(np.max(np.abs(A)) > tol and np.max(np.abs(A @ np.ones(A.shape[1]))) > tol)


def tanh_saturation(truth0, truth1, z_hat, omega, forces):
    """
    Smallest magnitude of the tanh factors per joint.

    Values close to 1 mean the dynamic and viscous terms are saturated, which the
    convergence argument assumes.

    Returns:
        numpy.ndarray: One value per joint in [0, 1].
    """
    z_hat = np.asarray(z_hat, dtype=float)
    result = []
    for truth, z, w, force in ((truth0, z_hat[0:5], omega[0], forces[0]),
                               (truth1, z_hat[5:10], omega[1], forces[1])):
        factors = (
            math.tanh(4.0 * w / truth.theta_dot_t),
            math.tanh(4.0 * w / z[3]),
            math.tanh(4.0 * force / truth.F_nt),
            math.tanh(4.0 * force / z[4]),
        )
        result.append(min(abs(f) for f in factors))
    return np.array(result)


@dataclass(frozen=True)
class ConditionReport:
    """
    Convergence-condition summary of a set of estimates over a trajectory.

    Attributes:
        condition_fraction (float): Share of samples whose mismatch matrix passes `condition_holds`.
        saturated_fraction (float): Share of samples whose tanh factors reach the saturation
            level on both joints.
    """
    condition_fraction: float
    saturated_fraction: float

    def to_text(self):
        return (f"condition_fraction={self.condition_fraction!r}\n"
                f"saturated_fraction={self.saturated_fraction!r}\n")


def condition_report(p, truth0, truth1, z_hat, trajectory, normal_force=None, tol=1e-12,
                     saturation_level=0.99):
    """
    Evaluates the convergence condition and the tanh saturation at every sample of a trajectory.

    A condition fraction of 0 means the estimates reproduce the reference friction at every
    visited velocity; a positive fraction means the mismatch is visible to the observer there.

    Args:
        p (PhysicalParams): Rig parameters.
        truth0, truth1 (FrictionParams): Reference parameters.
        z_hat (array): Estimates z1..z10.
        trajectory (Trajectory): States at which the friction terms are compared.
        normal_force (callable, optional): Normal force provider.
        tol (float): Tolerance of `condition_holds`.
        saturation_level (float): Smallest tanh factor counted as saturated.

    Returns:
        ConditionReport: The two sample fractions.
    """
    if len(trajectory) == 0:
        raise ValueError("the condition check needs at least one sample")
    provider = normal_force or DEFAULT_NORMAL_FORCE
    holds = saturated = 0
    for x in trajectory.states:
        omega = x[2:4]
        forces = (provider(p, x, 0), provider(p, x, 1))
        if condition_holds(condition_matrix(truth0, truth1, z_hat, omega, forces), tol):
            holds += 1
        if np.all(tanh_saturation(truth0, truth1, z_hat, omega, forces) >= saturation_level):
            saturated += 1
    return ConditionReport(holds / len(trajectory), saturated / len(trajectory))
