import math

import numpy as np

from ..errors import SingularInertiaError
from .friction import DEFAULT_NORMAL_FORCE, friction_torque
from .params import State

# |det H| below this value (kg^2 m^4) is treated as singular; physical rigs sit many orders above it
SINGULARITY_TOLERANCE = 1e-12

# Accepted values of the `form` argument of eval_B
CORIOLIS_FORMS = ("consistent", "printed")


def _as_array(s):
    """
    Accepts either a State or any length-4 sequence and returns a float array.
    """
    if isinstance(s, State):
        return s.as_array()
    return np.asarray(s, dtype=float)


def eval_H(p, s):
    """
    Generalized inertia matrix H(q) of the tilted Furuta pendulum.

    Parameters:
    - p (PhysicalParams): Rig parameters.
    - s (State or array): Current state; only theta1 is used.

    Returns:
    - numpy.ndarray: Symmetric 2x2 matrix in kg m^2.
    """
    theta1 = _as_array(s)[1]
    s1 = math.sin(theta1)
    c1 = math.cos(theta1)
    h00 = p.j1z + p.m1 * p.l1 ** 2 + (p.m2 * p.l2 ** 2 + p.j2y) * s1 ** 2 + p.j2z * c1 ** 2
    h01 = -p.m2 * p.l2 * p.L1 * c1
    h11 = p.j2x + p.m2 * p.l2 ** 2
    return np.array([[h00, h01], [h01, h11]])


def eval_B(p, s, form="consistent"):
    """
    Coriolis and centrifugal generalized forces B(q, q_dot).

    Two forms are available. "printed" reproduces the closed-form vector as it is
    usually published for this rig. "consistent" derives the vector from eval_H
    through the Christoffel symbols; it is the only one of the two under which the
    frictionless model conserves mechanical energy, so it is the default.

    Parameters:
    - p (PhysicalParams): Rig parameters.
    - s (State or array): Current state.
    - form (str): "consistent" or "printed".

    Returns:
    - numpy.ndarray: 2-vector in N m.
    """
    _, theta1, omega0, omega1 = _as_array(s)
    s1 = math.sin(theta1)
    c1 = math.cos(theta1)
    arm_coupling = p.m2 * p.l2 * p.L1
    if form == "consistent":
        # dH00/dtheta1 = 2 (m2 l2^2 + j2y - j2z) sin cos, dH01/dtheta1 = m2 l2 L1 sin
        spin = p.m2 * p.l2 ** 2 + p.j2y - p.j2z
        b0 = spin * math.sin(2.0 * theta1) * omega0 * omega1 + arm_coupling * s1 * omega1 ** 2
        b1 = -spin * s1 * c1 * omega0 ** 2
    elif form == "printed":
        b0 = (-(p.m2 * p.l2 ** 2 - p.j2y + p.j2x) * math.sin(2.0 * theta1) * omega0 * omega1
              - arm_coupling * s1 * omega1 ** 2)
        b1 = (p.m2 * p.l2 ** 2 - p.j2y + p.j2z) * s1 * c1 * omega0 ** 2
    else:
        raise ValueError(f"unknown Coriolis form {form!r}, expected one of {CORIOLIS_FORMS}")
    return np.array([b0, b1])


def eval_G(p, s):
    """
    Gravity generalized forces G(q) for a base axis tilted by phi.

    Parameters:
    - p (PhysicalParams): Rig parameters.
    - s (State or array): Current state; only the angles are used.

    Returns:
    - numpy.ndarray: 2-vector in N m.
    """
    theta0, theta1 = _as_array(s)[:2]
    s0, c0 = math.sin(theta0), math.cos(theta0)
    s1, c1 = math.sin(theta1), math.cos(theta1)
    sphi, cphi = math.sin(p.phi), math.cos(p.phi)
    g0 = (p.m1 * p.g * p.l1 * s0 * sphi
          + p.m2 * p.g * (p.L1 * s0 - p.l2 * s1 * c0) * sphi)
    g1 = -p.m2 * p.g * p.l2 * (s0 * c1 * sphi - s1 * cphi)
    return np.array([g0, g1])


def potential_energy(p, s):
    """
    Gravitational potential whose gradient is eval_G, zero at the equilibrium q = 0.
    """
    theta0, theta1 = _as_array(s)[:2]
    sphi, cphi = math.sin(p.phi), math.cos(p.phi)
    arm = p.g * sphi * (p.m1 * p.l1 + p.m2 * p.L1) * (1.0 - math.cos(theta0))
    cross = -p.m2 * p.g * p.l2 * sphi * math.sin(theta0) * math.sin(theta1)
    pendulum = p.m2 * p.g * p.l2 * cphi * (1.0 - math.cos(theta1))
    return arm + cross + pendulum


def kinetic_energy(p, s):
    x = _as_array(s)
    omega = x[2:]
    return 0.5 * float(omega @ eval_H(p, x) @ omega)


def mechanical_energy(p, s):
    """
    Total mechanical energy 1/2 q_dot^T H q_dot + V(q) in J.
    """
    return kinetic_energy(p, s) + potential_energy(p, s)


def solve_accelerations(H, forces):
    """
    Solves H q_ddot = forces, refusing numerically singular inertia matrices.

    Args:
        H (numpy.ndarray): 2x2 inertia matrix.
        forces (numpy.ndarray): Net generalized forces.

    Returns:
        numpy.ndarray: Joint accelerations (rad/s^2).
    """
    det = H[0, 0] * H[1, 1] - H[0, 1] * H[1, 0]
    if not abs(det) >= SINGULARITY_TOLERANCE:
        raise SingularInertiaError(
            f"generalized inertia matrix is singular (|det H| = {abs(det):.3g})")
    return np.linalg.solve(H, forces)


def dynamics_rhs(p, fp0, fp1, s, u=None, normal_force=None, coriolis="consistent"):
    """
    State derivative of the tilted Furuta pendulum.

    Solves H(q) q_ddot = -Q(q_dot) + u - B(q, q_dot) - G(q), where Q is the friction
    vector. Friction is applied with a negative sign so that positive coefficients
    always dissipate energy.

    Parameters:
    - p (PhysicalParams): Rig parameters.
    - fp0, fp1 (FrictionParams): Friction of the arm and pendulum joints.
    - s (State or array): Current state.
    - u (GeneralizedForces or array, optional): External torques; None for the passive plant.
    - normal_force (callable, optional): Normal force provider (p, s, joint) -> N.
    - coriolis (str): Form of the Coriolis vector, see eval_B.

    Returns:
    - numpy.ndarray: (omega0, omega1, theta0_ddot, theta1_ddot).
    """
    x = _as_array(s)
    provider = normal_force or DEFAULT_NORMAL_FORCE
    friction = np.array([
        friction_torque(fp0, x[2], provider(p, x, 0)),
        friction_torque(fp1, x[3], provider(p, x, 1)),
    ])
    forces = -friction - eval_B(p, x, coriolis) - eval_G(p, x)
    if u is not None:
        forces = forces + (u.as_array() if hasattr(u, "as_array") else np.asarray(u, dtype=float))
    accelerations = solve_accelerations(eval_H(p, x), forces)
    return np.concatenate([x[2:], accelerations])
