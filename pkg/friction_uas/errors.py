class FrictionUASError(Exception):
    """
    Base class for every error raised by the FrictionUAS package.
    """


class ConfigError(FrictionUASError, ValueError):
    """
    Raised when a configuration file or a configuration value is invalid.
    """


class TrajectoryFormatError(FrictionUASError, ValueError):
    """
    Raised when a trajectory CSV file cannot be parsed.

    Attributes:
        line (int or None): The 1-based line number of the offending row, if known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SingularInertiaError(FrictionUASError, ArithmeticError):
    """
    Raised when the generalized inertia matrix is numerically singular, which signals non-physical parameters.
    """


class NonFiniteStateError(FrictionUASError, ArithmeticError):
    """
    Raised when an integration step produces NaN or infinite values.

    Attributes:
        time (float or None): The simulation time at which the step failed.
    """

    def __init__(self, message, time=None):
        if time is not None:
            message = f"t={time:.6g} s: {message}"
        super().__init__(message)
        self.time = time


class SeriesConvergenceError(FrictionUASError, ArithmeticError):
    """
    Raised when a Nussbaum function cannot be evaluated reliably: the Mittag-Leffler series
    is out of range or the closed-form N4 overflows.
    """


class NoConvergenceError(FrictionUASError, RuntimeError):
    """
    Raised by strict identification runs whose error norm never crosses the threshold.

    Attributes:
        min_e_norm (float): The smallest error norm reached during the run.
    """

    def __init__(self, message, min_e_norm):
        super().__init__(f"{message} (min ||e|| = {min_e_norm:.6g})")
        self.min_e_norm = min_e_norm


class ConstantReferenceError(FrictionUASError, ValueError):
    """
    Raised when a goodness-of-fit reference series has zero variance.
    """


class NonUniformSamplingError(FrictionUASError, ValueError):
    """
    Raised when a spectrum is requested for a trajectory that is not uniformly sampled.
    """


class EstimatesError(FrictionUASError, ValueError):
    """
    Raised when a parameter estimates file does not hold exactly ten values.
    """
