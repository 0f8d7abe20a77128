import math


def stribeck_torque(mu_d, mu_s, mu_v, theta_dot_t, F_nt, omega, F_n):
    """
    Evaluates the continuous friction torque of one joint from raw parameter values.

    The torque is the sum of a tanh-smoothed dynamic (Coulomb) term, a rational
    Stribeck term that adds the static-minus-dynamic bump around the transition
    velocity, and a viscous term switched on by the normal force. It has the same
    sign as `omega`; callers apply it with a negative sign to dissipate energy.

    Parameters:
    - mu_d, mu_s, mu_v (float): Dynamic, static and viscous coefficients.
    - theta_dot_t (float): Transition angular velocity (rad/s), non-zero.
    - F_nt (float): Transition force (N), non-zero.
    - omega (float): Joint angular velocity (rad/s).
    - F_n (float): Normal force in the joint (N).

    Returns:
    - float: Friction torque (N m).
    """
    ratio = omega / theta_dot_t
    dynamic = F_n * mu_d * math.tanh(4.0 * ratio)
    stribeck = F_n * (mu_s - mu_d) * ratio / (0.25 * ratio * ratio + 0.75)
    viscous = mu_v * omega * math.tanh(4.0 * F_n / F_nt)
    return dynamic + stribeck + viscous


def friction_torque(fp, omega, F_n):
    """
    Friction torque of a joint described by FrictionParams.

    Parameters:
    - fp (FrictionParams): The joint's friction parameters.
    - omega (float): Joint angular velocity (rad/s).
    - F_n (float): Normal force (N), non-negative.

    Returns:
    - float: f(omega) in N m, odd in omega.
    """
    return stribeck_torque(fp.mu_d, fp.mu_s, fp.mu_v, fp.theta_dot_t, fp.F_nt, omega, F_n)


class StaticNormalForce:
    """
    Weight-based normal force provider.

    The base joint carries both links, the pendulum joint carries the pendulum only.
    The force does not depend on the state. Any callable with the same signature
    can replace it to model state-dependent reaction forces.
    """

    def __call__(self, p, s, joint):
        if joint == 0:
            return (p.m1 + p.m2) * p.g
        if joint == 1:
            return p.m2 * p.g
        raise ValueError(f"joint index must be 0 or 1, got {joint}")


class ConstantNormalForce:
    """
    Normal force provider returning fixed values per joint.
    """

    def __init__(self, force0, force1):
        self.forces = (float(force0), float(force1))

    def __call__(self, p, s, joint):
        if joint not in (0, 1):
            raise ValueError(f"joint index must be 0 or 1, got {joint}")
        return self.forces[joint]


# Default provider shared by the plant, the observer and the optimizer
DEFAULT_NORMAL_FORCE = StaticNormalForce()


def normal_force(p, s, joint, provider=None):
    """
    Normal force in a joint according to a provider (the static one by default).

    Args:
        p (PhysicalParams): Rig parameters.
        s (State or None): Current state; ignored by the static provider.
        joint (int): 0 for the arm joint, 1 for the pendulum joint.
        provider (callable, optional): Replacement provider.

    Returns:
        float: Normal force in N.
    """
    provider = provider or DEFAULT_NORMAL_FORCE
    return provider(p, s, joint)
