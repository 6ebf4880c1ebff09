from .kernel import KernelExponent, eval_kernel, integral_power_kernel, expected_randomized_weight_sq
from .randomness import FineNoise, GridSpec, generate_fine_noise, coarsen_increments, tau_for_step
from .problem import SvieProblem, builtin_benchmark, get_problem, validate
from .scheme import Trajectory, StageCache, simulate, RANDOMIZED_MILSTEIN, RANDOMIZED_EM, CLASSICAL_EM
from .experiment import ErrorTable, RateEstimate, strong_error, strong_errors, estimate_rate, holder_exponent
