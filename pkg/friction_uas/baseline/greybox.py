import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..errors import NonFiniteStateError, SingularInertiaError
from ..model.params import split_parameter_vector
from ..report import IdentificationReport
from ..sim.simulation import resimulate
from ..sim.trajectory import CSV_FLOAT_FORMAT
from ..uas.observer import initial_guess_sample
from ..utils import get_logger

logger = get_logger("baseline")

# A failed simulation scores this many times the objective of a zero prediction
PENALTY_FACTOR = 1e6

OBJECTIVE_TRACE_HEADER = ("eval", "objective", "best")


@dataclass(frozen=True)
class OptConfig:
    """
    Settings of the grey-box simplex search.

    Attributes:
        max_evals (int): Hard budget of objective evaluations.
        init_simplex_scale (float): Edge of the initial simplex as a fraction of each bound width.
        tolerance (float): Objective spread across the simplex at which the search stops.
        x_tolerance (float): Parameter spread across the simplex at which the search stops.
    """
    max_evals: int = 2000
    init_simplex_scale: float = 0.1
    tolerance: float = 1e-10
    x_tolerance: float = 1e-9

    def __post_init__(self):
        if int(self.max_evals) != self.max_evals or self.max_evals <= 0:
            raise ValueError(f"max_evals must be a positive integer, got {self.max_evals}")
        if not 0.0 < self.init_simplex_scale <= 1.0:
            raise ValueError(f"init_simplex_scale must lie in (0, 1], got {self.init_simplex_scale}")
        if self.tolerance < 0.0 or self.x_tolerance < 0.0:
            raise ValueError("tolerances must be non-negative")


def _baseline_objective(measured):
    return float(np.sum(measured.positions ** 2))


def objective(z, measured, p, normal_force=None, coriolis="consistent"):
    """
    Summed squared position error of a simulation with friction parameters z.

    The plant is simulated from the first measured sample with the measurement step,
    for as many samples as were measured, and compared on both joint angles.

    Parameters:
    - z (array): Friction parameters z1..z10.
    - measured (Trajectory): Measured trajectory.
    - p (PhysicalParams): Known rig parameters.
    - normal_force (callable, optional): Normal force provider.
    - coriolis (str): Coriolis vector form.

    Returns:
    - float: The objective; PENALTY_FACTOR times the squared measured positions when the
      simulation fails.

    Raises:
    - ValueError: If the trajectory holds fewer than two samples.
    """
    if len(measured) < 2:
        raise ValueError("the objective needs a measured trajectory of at least two samples")
    fp0, fp1 = split_parameter_vector(z)
    try:
        predicted = resimulate(p, fp0, fp1, measured, normal_force=normal_force, coriolis=coriolis)
    except (SingularInertiaError, NonFiniteStateError) as err:
        baseline = _baseline_objective(measured)
        penalty = PENALTY_FACTOR * baseline if baseline > 0.0 else PENALTY_FACTOR
        logger.warning("simulation failed for z=%s (%s); objective penalised to %.6g",
                       np.array2string(np.asarray(z), precision=4), err, penalty)
        return penalty
    residual = predicted.positions - measured.positions
    return float(np.sum(residual * residual))


class _BudgetExhausted(Exception):
    pass


class _BoundedObjective:
    """
    Wraps the objective with projection onto the bounds, a hard evaluation budget
    and bookkeeping of the best point.
    """

    def __init__(self, function, lower, upper, max_evals):
        self.function = function
        self.lower = lower
        self.upper = upper
        self.max_evals = max_evals
        self.values = []
        self.best_x = None
        self.best_value = np.inf

    def __call__(self, z):
        if len(self.values) >= self.max_evals:
            raise _BudgetExhausted()
        z = np.clip(z, self.lower, self.upper)
        value = self.function(z)
        self.values.append(value)
        if value < self.best_value:
            self.best_value = value
            self.best_x = z.copy()
        return value


def initial_simplex(x0, lower, upper, scale):
    """
    Axis-aligned initial simplex inside the bounds.

    Vertex i+1 moves parameter i by `scale` times its bound width, towards the
    upper bound when that stays inside and towards the lower bound otherwise.

    Returns:
        numpy.ndarray: (n + 1) x n vertices, the first one being x0.
    """
    x0 = np.asarray(x0, dtype=float)
    vertices = np.tile(x0, (x0.size + 1, 1))
    step = scale * (upper - lower)
    for i in range(x0.size):
        if x0[i] + step[i] <= upper[i]:
            vertices[i + 1, i] = x0[i] + step[i]
        else:
            vertices[i + 1, i] = x0[i] - step[i]
    return vertices


def optimize(measured, p, cfg, bounds, seed, x0=None, normal_force=None, coriolis="consistent"):
    """
    Identifies the friction parameters with a bounded Nelder-Mead search on the simulation error.

    Parameters:
    - measured (Trajectory): Measured trajectory.
    - p (PhysicalParams): Known rig parameters.
    - cfg (OptConfig): Budget and tolerances.
    - bounds (AdaptationConfig): Supplies the lower and upper bounds z_l and z_u.
    - seed (int): Seed of the starting point drawn by initial_guess_sample.
    - x0 (array, optional): Explicit starting point, projected onto the bounds.
    - normal_force (callable, optional): Normal force provider.
    - coriolis (str): Coriolis vector form.

    Returns:
    - IdentificationReport: Best point, objective trace, evaluation count and wall time.
      Running out of budget is reported with converged=False, not raised.
    """
    lower, upper = bounds.z_l, bounds.z_u
    start_point = initial_guess_sample(bounds, seed) if x0 is None else np.clip(x0, lower, upper)
    wrapped = _BoundedObjective(
        lambda z: objective(z, measured, p, normal_force=normal_force, coriolis=coriolis),
        lower, upper, int(cfg.max_evals))

    logger.info("starting simplex search with a budget of %d evaluations", cfg.max_evals)
    start = time.thread_time()
    try:
        result = minimize(
            wrapped,
            x0=start_point,
            method="Nelder-Mead",
            bounds=list(zip(lower, upper)),
            options={
                "initial_simplex": initial_simplex(start_point, lower, upper, cfg.init_simplex_scale),
                "maxfev": int(cfg.max_evals),
                "fatol": cfg.tolerance,
                "xatol": cfg.x_tolerance,
            },
        )
        converged = bool(result.success)
    except _BudgetExhausted:
        converged = False
    wall_time = time.thread_time() - start

    if wrapped.best_x is None:
        raise RuntimeError("the simplex search evaluated no point")
    logger.info("simplex search finished after %d evaluations, best objective %.6g%s",
                len(wrapped.values), wrapped.best_value, "" if converged else " (budget exhausted)")
    return IdentificationReport("opt", wrapped.best_x, converged, wall_time,
                                evaluations=len(wrapped.values),
                                objective_trace=np.array(wrapped.values))


def write_objective_trace_csv(report, path):
    """
    Writes the optimizer trace as CSV with header eval,objective,best.
    """
    if report.objective_trace is None:
        raise ValueError(f"a {report.method} report carries no objective trace")
    values = report.objective_trace
    table = np.column_stack([np.arange(1, values.size + 1), values, np.minimum.accumulate(values)])
    np.savetxt(path, table, fmt=["%d", CSV_FLOAT_FORMAT, CSV_FLOAT_FORMAT], delimiter=",",
               header=",".join(OBJECTIVE_TRACE_HEADER), comments="")
