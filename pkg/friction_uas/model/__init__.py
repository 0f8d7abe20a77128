from .dynamics import (CORIOLIS_FORMS, SINGULARITY_TOLERANCE, dynamics_rhs,
                       eval_B, eval_G, eval_H, kinetic_energy,
                       mechanical_energy, potential_energy,
                       solve_accelerations)
from .friction import (DEFAULT_NORMAL_FORCE, ConstantNormalForce,
                       StaticNormalForce, friction_torque, normal_force,
                       stribeck_torque)
from .params import (FrictionParams, GeneralizedForces, PhysicalParams,
                     State, join_parameter_vector, perturb_state,
                     split_parameter_vector)
