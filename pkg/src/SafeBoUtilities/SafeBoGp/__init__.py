# pylint: disable-msg=C0103
"""
SafeBoGp: This package provides exact Gaussian process regression.
"""

# __init__.py
from .kernels import (RbfKernel, LinearKernel, SumKernel, KernelSpec, kernel_eval,
                      kernel_from_dict, kernel_to_dict, as_point, as_points)
from .gaussian_process import (Posterior, GpModel, gp_condition, gp_posterior,
                               information_gain, JITTER_LEVELS)
