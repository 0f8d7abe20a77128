from .diagnostics import (ConditionReport, condition_holds, condition_matrix,
                          condition_report, tanh_saturation)
from .identification import (PARAMETER_TRACE_HEADER, crossing_index,
                             end_of_motion_index, extract_estimates, identify,
                             write_parameter_trace_csv)
from .nussbaum import (NUSSBAUM_KINDS, NussbaumSpec, mittag_leffler, nussbaum,
                       running_average)
from .observer import (OBSERVER_SIZE, AdaptationConfig, ObserverState,
                       adapt_rhs, estimated_friction, initial_guess_sample,
                       initial_observer_state, lti_solution, observer_rhs,
                       uas_input)
