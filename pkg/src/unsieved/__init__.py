"""Smooth-number densities, sieve integral equations, and mean values of
multiplicative functions taking values in [0, 1]."""

from .dickman import (EULER_GAMMA, EXP_GAMMA, DickmanTable, ParameterError,
                      RangeError, build_dickman, rho, rho_integral,
                      rho_tail_bound)
from .kernel import (DICKMAN_KERNEL, IDENTITY_KERNEL, ChiKernel, KernelError,
                     SigmaSolution, compute_B, compute_E,
                     laplace_identity_rhs, laplace_sigma, log_E,
                     perturb_sigma, sandwich_bounds, sandwich_tolerance,
                     series_I, solve_sigma, step_kernel)
from .bounds import (BoundsRow, asymptotic_lower_report, bounds_table,
                     lower_objective, rows_to_csv, rows_to_records,
                     theorem1_lower, theorem3_upper_lambda,
                     theorem3_upper_quadratic)
from .sieve import (MultiplicativeSpec, ResourceError, SieveResult,
                    chi_from_f, construction_theorem1, mean_value, psi_smooth,
                    theorem1_direct_count, verify_correspondence)
from .corpus import random_corpus, random_kernel, run_property_suite

__all__ = [
    "EULER_GAMMA", "EXP_GAMMA", "DickmanTable", "ParameterError",
    "RangeError", "build_dickman", "rho", "rho_integral", "rho_tail_bound",
    "DICKMAN_KERNEL", "IDENTITY_KERNEL", "ChiKernel", "KernelError",
    "SigmaSolution", "compute_B", "compute_E", "laplace_identity_rhs",
    "laplace_sigma", "log_E", "perturb_sigma", "sandwich_bounds",
    "sandwich_tolerance", "series_I", "solve_sigma", "step_kernel",
    "BoundsRow", "asymptotic_lower_report", "bounds_table",
    "lower_objective", "rows_to_csv", "rows_to_records", "theorem1_lower",
    "theorem3_upper_lambda", "theorem3_upper_quadratic",
    "MultiplicativeSpec", "ResourceError", "SieveResult", "chi_from_f",
    "construction_theorem1", "mean_value", "psi_smooth",
    "theorem1_direct_count", "verify_correspondence",
    "random_corpus", "random_kernel", "run_property_suite",
]

__version__ = "0.1.0"
