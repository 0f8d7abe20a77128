import math
import time

import numpy as np

from ..errors import NoConvergenceError, NonFiniteStateError, SeriesConvergenceError, SingularInertiaError
from ..model.friction import DEFAULT_NORMAL_FORCE
from ..presets import PARAMETER_NAMES
from ..report import IdentificationReport, ParameterTrace
from ..sim.integrator import rk4_step
from ..sim.trajectory import CSV_FLOAT_FORMAT
from ..utils import get_logger
from .observer import K_INDEX, Z_SLICE, _observer_rate

logger = get_logger("uas")

PARAMETER_TRACE_HEADER = ("t",) + tuple(f"z{n}" for n in range(1, 11)) + ("k", "e_norm")


def _error_norm(measured_velocity, x):
    return math.hypot(measured_velocity[0] - x[2], measured_velocity[1] - x[3])


def identify(measured, p, cfg, spec, init, normal_force=None, coriolis="consistent", strict=False):
    """
    Runs the adaptive observer against a measured trajectory and extracts parameter estimates.

    The observer is integrated with RK4 at the measurement rate; each measured sample is
    held constant over the step that follows it. Estimates are read at the first sample
    where the error norm drops below `cfg.threshold` after having been at or above it
    (and stays below for `cfg.dwell_time`). With averaging enabled they are averaged from
    that sample until the measured motion stops.

    Parameters:
    - measured (Trajectory): Uniformly sampled measurements with velocities.
    - p (PhysicalParams): Known rig parameters.
    - cfg (AdaptationConfig): Adaptation and extraction settings.
    - spec (NussbaumSpec): Nussbaum function selection.
    - init (ObserverState): Observer initial condition.
    - normal_force (callable, optional): Normal force provider.
    - coriolis (str): Coriolis vector form.
    - strict (bool): Raise instead of reporting when the threshold is never crossed.

    Returns:
    - IdentificationReport: Estimates, crossing time, minimum error norm, wall time and trace.

    Raises:
    - ValueError: If the trajectory is too short or not uniformly sampled.
    - NoConvergenceError: In strict mode, when the threshold is never crossed.
    - SingularInertiaError, SeriesConvergenceError, NonFiniteStateError: With the failing time.
    """
    if len(measured) < 2:
        raise ValueError("identification needs at least two measured samples")
    if not measured.is_uniform():
        raise ValueError("identification needs a uniformly sampled trajectory")

    provider = normal_force or DEFAULT_NORMAL_FORCE
    dt = measured.dt
    times = measured.times
    velocities = measured.velocities
    n_samples = len(measured)

    history = np.empty((n_samples, init.to_vector().size))
    history[0] = init.to_vector()
    e_norm = np.empty(n_samples)
    e_norm[0] = _error_norm(velocities[0], history[0])

    logger.info("identifying %d friction parameters over %.6g s of data (%d samples)",
                len(PARAMETER_NAMES), measured.duration, n_samples)
    start = time.thread_time()
    for i in range(n_samples - 1):
        held = velocities[i]

        def rhs(t, x):
            return _observer_rate(p, x, held, cfg, spec, provider, coriolis)

        try:
            history[i + 1] = rk4_step(rhs, history[i], dt, t=times[i])
        except (SingularInertiaError, SeriesConvergenceError) as err:
            raise type(err)(f"t={times[i]:.6g} s: {err}") from err
        except OverflowError as err:
            raise NonFiniteStateError(f"observer overflowed: {err}", time=times[i]) from err
        e_norm[i + 1] = _error_norm(velocities[i + 1], history[i + 1])
    wall_time = time.thread_time() - start

    trace = ParameterTrace(times.copy(), history[:, Z_SLICE].copy(), history[:, K_INDEX].copy(), e_norm)
    return extract_estimates(trace, measured, cfg, wall_time, strict=strict)


def crossing_index(e_norm, threshold, dwell_samples=0):
    """
    Index of the first sample below the threshold after the norm has been at or above it.

    Args:
        e_norm (numpy.ndarray): Error norm per sample.
        threshold (float): Extraction threshold.
        dwell_samples (int): Following samples that must stay below the threshold too.

    Returns:
        int or None: 0 when the norm never reaches the threshold, None when it never
        comes back below it.
    """
    above = e_norm >= threshold
    if not np.any(above):
        return 0
    below = ~above
    first_above = int(np.argmax(above))
    for i in np.flatnonzero(below[first_above:]) + first_above:
        window = below[i:i + dwell_samples + 1]
        if window.size == dwell_samples + 1 and np.all(window):
            return int(i)
    return None


def end_of_motion_index(measured, motion_threshold):
    """
    Last sample whose measured speed exceeds `motion_threshold`; the final sample when it is 0.
    """
    if motion_threshold <= 0.0:
        return len(measured) - 1
    speed = np.hypot(measured.velocities[:, 0], measured.velocities[:, 1])
    moving = np.flatnonzero(speed > motion_threshold)
    return int(moving[-1]) if moving.size else 0


def extract_estimates(trace, measured, cfg, wall_time, strict=False):
    """
    Builds the identification report from a recorded observer trace.
    """
    dwell_samples = int(round(cfg.dwell_time / measured.dt)) if cfg.dwell_time > 0.0 else 0
    index = crossing_index(trace.e_norm, cfg.threshold, dwell_samples)
    min_e_norm = float(np.min(trace.e_norm))

    if index is None:
        if strict:
            raise NoConvergenceError(
                f"error norm never fell below the threshold {cfg.threshold:g} rad/s", min_e_norm)
        best = int(np.argmin(trace.e_norm))
        logger.warning("error norm never fell below %g rad/s (min %.6g at t=%.6g s); "
                       "reporting the estimates at the minimum", cfg.threshold, min_e_norm, trace.times[best])
        return IdentificationReport("uas", trace.z_hat[best].copy(), False, wall_time,
                                    crossing_time=None, min_e_norm=min_e_norm, trace=trace)

    estimates = trace.z_hat[index].copy()
    if cfg.averaging:
        stop = max(end_of_motion_index(measured, cfg.motion_threshold), index)
        estimates = trace.z_hat[index:stop + 1].mean(axis=0)
        logger.debug("averaged estimates over samples %d..%d", index, stop)
    crossing_time = float(trace.times[index])
    logger.info("error norm crossed %g rad/s at t=%.6g s (final gain k=%.6g)",
                cfg.threshold, crossing_time, trace.k[-1])
    return IdentificationReport("uas", estimates, True, wall_time, crossing_time=crossing_time,
                                min_e_norm=min_e_norm, trace=trace)


def write_parameter_trace_csv(report, path):
    """
    Writes the observer trace as CSV with header t,z1..z10,k,e_norm.

    Args:
        report (IdentificationReport): An observer report carrying a trace.
        path (str): Destination file.
    """
    trace = report.trace
    if trace is None:
        raise ValueError(f"a {report.method} report carries no parameter trace")
    table = np.column_stack([trace.times, trace.z_hat, trace.k, trace.e_norm])
    np.savetxt(path, table, fmt=CSV_FLOAT_FORMAT, delimiter=",",
               header=",".join(PARAMETER_TRACE_HEADER), comments="")
