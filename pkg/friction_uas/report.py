import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import EstimatesError

# Order of the fields written after the ten estimates
REPORT_KEYS = ("fit_theta0", "fit_theta1", "wall_time", "normalized_time",
               "crossing_time", "converged", "min_e_norm", "evaluations")


@dataclass(frozen=True, eq=False)
class ParameterTrace:
    """
    Time history recorded by an identification run.

    Attributes:
        times (numpy.ndarray): Sample times (s).
        z_hat (numpy.ndarray): N x 10 parameter estimates.
        k (numpy.ndarray): UAS gain per sample.
        e_norm (numpy.ndarray): Velocity error norm per sample (rad/s).
    """
    times: np.ndarray
    z_hat: np.ndarray
    k: np.ndarray
    e_norm: np.ndarray


@dataclass(frozen=True, eq=False)
class IdentificationReport:
    """
    Outcome of one identification run, produced by both the observer and the optimizer.

    Attributes:
        method (str): "uas" or "opt".
        estimates (numpy.ndarray): The ten identified parameters z1..z10.
        converged (bool): Observer: the error norm crossed the threshold.
            Optimizer: the simplex met its tolerance before the budget ran out.
        wall_time (float): Computation time (s), the CPU time of the thread that ran the method.
        crossing_time (float or None): Time (s) of the threshold crossing, observer only.
        min_e_norm (float or None): Smallest error norm reached, observer only.
        evaluations (int or None): Objective evaluations, optimizer only.
        trace (ParameterTrace or None): Observer time history.
        objective_trace (numpy.ndarray or None): Objective per evaluation, optimizer only.
        fit_theta0, fit_theta1 (float or None): Goodness of fit of a validation simulation (%).
        normalized_time (float or None): Computation time per second of data per sample rate.
    """
    method: str
    estimates: np.ndarray
    converged: bool
    wall_time: float
    crossing_time: float = None
    min_e_norm: float = None
    evaluations: int = None
    trace: ParameterTrace = field(default=None, repr=False)
    objective_trace: np.ndarray = field(default=None, repr=False)
    fit_theta0: float = None
    fit_theta1: float = None
    normalized_time: float = None

    def with_fit(self, fit, normalized_time):
        """
        Returns a copy carrying the validation fit and normalized time.

        Args:
            fit (FitReport): Validation result of the estimates.
            normalized_time (float): Normalized computation time.
        """
        return replace(self, fit_theta0=fit.r2_theta0, fit_theta1=fit.r2_theta1,
                       normalized_time=normalized_time)

    def to_text(self):
        """
        Serializes the report as UTF-8 `key=value` lines; absent values are written as "none".
        """
        lines = [f"method={self.method}"]
        lines += [f"z{n}={_format_value(value)}" for n, value in enumerate(self.estimates, start=1)]
        for key in REPORT_KEYS:
            lines.append(f"{key}={_format_value(getattr(self, key))}")
        return "\n".join(lines) + "\n"


def _format_value(value):
    if value is None:
        return "none"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_report(report, path):
    with open(path, "w", encoding="utf-8") as report_file:
        report_file.write(report.to_text())


def parse_key_values(text):
    """
    Parses `key=value` lines, skipping blank and `#` lines.

    Returns:
        dict: Values as stripped strings.
    """
    values = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise EstimatesError(f"expected key=value, got {line!r}")
        values[key.strip()] = value.strip()
    return values


def read_estimates(path):
    """
    Reads ten parameter estimates from a report file or from a bare list of numbers.

    A report is recognised by its `key=value` lines and must hold z1..z10. Any other
    file is read as numbers separated by commas or whitespace.

    Args:
        path (str): Estimates file.

    Returns:
        numpy.ndarray: The ten estimates.

    Raises:
        EstimatesError: If the file does not hold exactly ten finite values.
    """
    with open(path, "r", encoding="utf-8") as estimates_file:
        text = estimates_file.read()

    if "=" in text:
        values = parse_key_values(text)
        missing = [f"z{n}" for n in range(1, 11) if f"z{n}" not in values]
        if missing:
            raise EstimatesError(f"{path} is missing estimates {', '.join(missing)}")
        tokens = [values[f"z{n}"] for n in range(1, 11)]
    else:
        numbers = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
        tokens = numbers.replace(",", " ").split()
        if len(tokens) != 10:
            raise EstimatesError(f"{path} holds {len(tokens)} values, expected 10")

    try:
        estimates = np.array([float(token) for token in tokens])
    except ValueError as err:
        raise EstimatesError(f"{path}: {err}") from err
    if not all(math.isfinite(v) for v in estimates):
        raise EstimatesError(f"{path} holds non-finite estimates")
    return estimates
