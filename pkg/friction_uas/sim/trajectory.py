import csv
from dataclasses import dataclass

import numpy as np

from ..errors import TrajectoryFormatError
from ..model.params import State

TRAJECTORY_HEADER = ("t", "theta0", "theta1", "omega0", "omega1")
POSITION_HEADER = TRAJECTORY_HEADER[:3]

# Full-precision decimal formatting; parsing it back reproduces every double bit for bit
CSV_FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Uniformly sampled record of the pendulum state.

    Attributes:
        times (numpy.ndarray): Sample times in seconds, strictly increasing.
        states (numpy.ndarray): N x 4 array of (theta0, theta1, omega0, omega1).
    """
    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if times.ndim != 1 or states.shape != (times.size, 4):
            raise ValueError(
                f"states must have shape ({times.size}, 4), got {states.shape}")
        if times.size > 1 and not np.all(np.diff(times) > 0.0):
            raise ValueError("trajectory times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return self.times.size

    @property
    def dt(self):
        """
        Sampling step in seconds; taken from the first interval.
        """
        if len(self) < 2:
            raise ValueError("a trajectory needs at least two samples to define a step")
        return float(self.times[1] - self.times[0])

    @property
    def duration(self):
        return float(self.times[-1] - self.times[0]) if len(self) else 0.0

    @property
    def positions(self):
        return self.states[:, :2]

    @property
    def velocities(self):
        return self.states[:, 2:]

    def state(self, i):
        return State.from_array(self.states[i])

    def is_uniform(self, rtol=1e-6):
        if len(self) < 2:
            return False
        steps = np.diff(self.times)
        return bool(np.allclose(steps, steps[0], rtol=rtol, atol=0.0))

    def copy_with_states(self, states):
        return Trajectory(self.times.copy(), states)


def write_trajectory_csv(traj, path):
    """
    Writes a trajectory as CSV with header t,theta0,theta1,omega0,omega1 (radians).

    Args:
        traj (Trajectory): Trajectory to write.
        path (str): Destination file.
    """
    table = np.column_stack([traj.times, traj.states])
    np.savetxt(path, table, fmt=CSV_FLOAT_FORMAT, delimiter=",",
               header=",".join(TRAJECTORY_HEADER), comments="")


def reconstruct_velocities(times, positions):
    """
    Central-difference velocities inside the record and one-sided differences at both ends.

    Args:
        times (numpy.ndarray): Sample times.
        positions (numpy.ndarray): N x 2 joint angles.

    Returns:
        numpy.ndarray: N x 2 angular velocities.
    """
    if times.size < 2:
        raise TrajectoryFormatError("at least two samples are needed to differentiate positions")
    return np.gradient(positions, times, axis=0, edge_order=1)


def read_trajectory_csv(path):
    """
    Reads a trajectory CSV. Velocity columns are optional; when the header only holds
    t,theta0,theta1 the velocities are reconstructed by finite differences.

    Args:
        path (str): CSV file with a header row.

    Returns:
        Trajectory: The parsed trajectory.

    Raises:
        TrajectoryFormatError: On a bad header, a malformed row, or a non-increasing time column.
    """
    rows = []
    header = None
    with open(path, "r", newline="") as csv_file:
        for line_number, row in enumerate(csv.reader(csv_file), start=1):
            # Blank lines and comment lines are skipped
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = tuple(cell.strip() for cell in row)
                if header not in (TRAJECTORY_HEADER, POSITION_HEADER):
                    raise TrajectoryFormatError(
                        f"unexpected header {','.join(header)!r}, expected "
                        f"{','.join(TRAJECTORY_HEADER)!r} or {','.join(POSITION_HEADER)!r}",
                        line=line_number)
                continue
            if len(row) != len(header):
                raise TrajectoryFormatError(
                    f"expected {len(header)} values, found {len(row)}", line=line_number)
            try:
                values = [float(cell) for cell in row]
            except ValueError as err:
                raise TrajectoryFormatError(str(err), line=line_number) from err
            if not all(np.isfinite(values)):
                raise TrajectoryFormatError("non-finite value", line=line_number)
            rows.append(values)

    if header is None or not rows:
        raise TrajectoryFormatError(f"{path} holds no samples")

    table = np.array(rows)
    times = table[:, 0]
    if times.size > 1 and not np.all(np.diff(times) > 0.0):
        raise TrajectoryFormatError("time column must be strictly increasing")
    if header == POSITION_HEADER:
        velocities = reconstruct_velocities(times, table[:, 1:3])
        states = np.column_stack([table[:, 1:3], velocities])
    else:
        states = table[:, 1:]
    return Trajectory(times, states)
