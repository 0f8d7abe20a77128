from .integrator import rk4_step, sample_count
from .simulation import (SimConfig, add_noise, energy_trace, measure,
                         propagate, resimulate, simulate)
from .trajectory import (TRAJECTORY_HEADER, Trajectory, read_trajectory_csv,
                         reconstruct_velocities, write_trajectory_csv)
