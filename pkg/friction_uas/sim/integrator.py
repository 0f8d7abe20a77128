import numpy as np

from ..errors import NonFiniteStateError


def rk4_step(rhs, x, dt, t=None):
    """
    Advances a state by one classical fourth-order Runge-Kutta step.

    Parameters:
    - rhs (callable): State derivative, called as rhs(x), or rhs(t, x) when `t` is given.
    - x (array): Current state vector.
    - dt (float): Step size in seconds.
    - t (float, optional): Current time, forwarded to time-dependent right-hand sides.

    Returns:
    - numpy.ndarray: State after the step.

    Raises:
    - NonFiniteStateError: If the update contains NaN or infinite values.
    """
    x = np.asarray(x, dtype=float)
    if t is None:
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * dt * k1)
        k3 = rhs(x + 0.5 * dt * k2)
        k4 = rhs(x + dt * k3)
    else:
        half = t + 0.5 * dt
        k1 = rhs(t, x)
        k2 = rhs(half, x + 0.5 * dt * k1)
        k3 = rhs(half, x + 0.5 * dt * k2)
        k4 = rhs(t + dt, x + dt * k3)
    x_next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(x_next)):
        raise NonFiniteStateError("integration step produced non-finite values", time=t)
    return x_next


def sample_count(duration, dt):
    """
    Number of samples of a uniformly sampled record including t = 0, floor(duration/dt) + 1.
    """
    # The small slack keeps e.g. 35 / 1e-3 from flooring to 34999
    return int(np.floor(duration / dt + 1e-9)) + 1
