import math
from dataclasses import dataclass

import numpy as np

from .errors import ConstantReferenceError, NonUniformSamplingError
from .sim.trajectory import CSV_FLOAT_FORMAT, TRAJECTORY_HEADER

SPECTRUM_HEADER = ("f", "mag_theta0", "phase_theta0", "mag_theta1", "phase_theta1")

# Trajectory channels by name, in state order
CHANNELS = TRAJECTORY_HEADER[1:]


@dataclass(frozen=True)
class FitReport:
    """
    Validation quality of a set of estimates.

    Attributes:
        r2_theta0, r2_theta1 (float): Goodness of fit of the joint angles (%), at most 100.
        computation_time (float or None): Identification wall time (s).
        normalized_time (float or None): Computation time per second of data per sample rate.
    """
    r2_theta0: float
    r2_theta1: float
    computation_time: float = None
    normalized_time: float = None

    def to_text(self):
        lines = []
        for key in ("r2_theta0", "r2_theta1", "computation_time", "normalized_time"):
            value = getattr(self, key)
            lines.append(f"{key}={'none' if value is None else repr(float(value))}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """
    One-sided discrete Fourier spectrum of a real signal, DC through Nyquist.

    Attributes:
        frequencies (numpy.ndarray): Bin frequencies (Hz), ascending from 0.
        magnitude (numpy.ndarray): |X_k| dt, the amplitude density of each bin.
        phase (numpy.ndarray): Bin phase (rad).
        n_samples (int): Length of the transformed record.
        dt (float): Sampling step (s).
    """
    frequencies: np.ndarray
    magnitude: np.ndarray
    phase: np.ndarray
    n_samples: int
    dt: float


def goodness_of_fit(ref, est):
    """
    Goodness of fit in percent, 100 (1 - sum (est - ref)^2 / sum (ref - mean(ref))^2).

    Args:
        ref (array): Reference series.
        est (array): Estimated series of the same length.

    Returns:
        float: 100 for a perfect match, 0 for the reference mean, negative for worse fits.

    Raises:
        ValueError: If the lengths differ or are below two.
        ConstantReferenceError: If the reference has no variance.
    """
    ref = np.asarray(ref, dtype=float)
    est = np.asarray(est, dtype=float)
    if ref.shape != est.shape or ref.ndim != 1:
        raise ValueError(f"series must be one-dimensional with equal lengths, got {ref.shape} and {est.shape}")
    if ref.size < 2:
        raise ValueError("goodness of fit needs at least two samples")
    spread = float(np.sum((ref - ref.mean()) ** 2))
    if spread == 0.0:
        raise ConstantReferenceError("the reference series is constant; the fit is undefined")
    return 100.0 * (1.0 - float(np.sum((est - ref) ** 2)) / spread)


def normalized_time(comp_time, experiment_time, fs):
    """
    Computation time divided by the number of samples of the experiment, comp / (T fs).
    """
    if not (comp_time > 0.0 and experiment_time > 0.0 and fs > 0.0):
        raise ValueError("computation time, experiment time and sample rate must be positive")
    return comp_time / (experiment_time * fs)


def _channel_index(channel):
    if isinstance(channel, str):
        if channel not in CHANNELS:
            raise ValueError(f"unknown channel {channel!r}, expected one of {CHANNELS}")
        return CHANNELS.index(channel)
    return int(channel)


def spectrum(traj, channel):
    """
    One-sided spectrum of one trajectory channel over the full record, without windowing.

    Parameters:
    - traj (Trajectory): Uniformly sampled trajectory.
    - channel (str or int): "theta0", "theta1", "omega0", "omega1" or the state column.

    Returns:
    - Spectrum: Frequencies from DC to Nyquist with magnitude and phase.

    Raises:
    - NonUniformSamplingError: If the sampling step varies.
    """
    if len(traj) < 2:
        raise ValueError("a spectrum needs at least two samples")
    if not traj.is_uniform():
        raise NonUniformSamplingError("the trajectory is not uniformly sampled")
    signal = traj.states[:, _channel_index(channel)]
    dt = traj.dt
    transform = np.fft.rfft(signal)
    phase = np.angle(transform)

    # DC (and Nyquist for even lengths) are real; pin their phase to 0 or pi
    phase[0] = 0.0 if transform[0].real >= 0.0 else math.pi
    if signal.size % 2 == 0:
        phase[-1] = 0.0 if transform[-1].real >= 0.0 else math.pi

    return Spectrum(np.fft.rfftfreq(signal.size, dt), np.abs(transform) * dt, phase, signal.size, dt)


def spectral_energy(spec):
    """
    Signal energy recovered from a one-sided spectrum; equals sum |x|^2 dt by Parseval.
    """
    weights = np.full(spec.magnitude.size, 2.0)
    weights[0] = 1.0
    if spec.n_samples % 2 == 0:
        weights[-1] = 1.0
    df = 1.0 / (spec.n_samples * spec.dt)
    return float(df * np.sum(weights * spec.magnitude ** 2))


def fit_report(ref_traj, est_traj, computation_time=None):
    """
    Goodness of fit of both joint angles, plus timing when a computation time is given.

    Args:
        ref_traj (Trajectory): Reference trajectory.
        est_traj (Trajectory): Trajectory simulated with the estimates, same sampling.
        computation_time (float, optional): Identification wall time (s).

    Returns:
        FitReport: The validation result.
    """
    if len(ref_traj) != len(est_traj):
        raise ValueError(f"trajectories differ in length ({len(ref_traj)} vs {len(est_traj)})")
    normalized = None
    if computation_time is not None and computation_time > 0.0:
        normalized = normalized_time(computation_time, ref_traj.duration, 1.0 / ref_traj.dt)
    return FitReport(
        goodness_of_fit(ref_traj.positions[:, 0], est_traj.positions[:, 0]),
        goodness_of_fit(ref_traj.positions[:, 1], est_traj.positions[:, 1]),
        computation_time,
        normalized,
    )


def write_spectrum_csv(traj, path):
    """
    Writes the spectra of both joint angles as CSV with header
    f,mag_theta0,phase_theta0,mag_theta1,phase_theta1.
    """
    spec0 = spectrum(traj, "theta0")
    spec1 = spectrum(traj, "theta1")
    table = np.column_stack([spec0.frequencies, spec0.magnitude, spec0.phase,
                             spec1.magnitude, spec1.phase])
    np.savetxt(path, table, fmt=CSV_FLOAT_FORMAT, delimiter=",",
               header=",".join(SPECTRUM_HEADER), comments="")
