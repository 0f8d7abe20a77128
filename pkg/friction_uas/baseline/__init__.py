from .greybox import (OBJECTIVE_TRACE_HEADER, PENALTY_FACTOR, OptConfig,
                      initial_simplex, objective, optimize,
                      write_objective_trace_csv)
