"""
Analysis subpackage: Monte Carlo and series checks of the kernel an
infinite forest of random trees induces.

"""
__all__ = ['LimitConfig',
           'chopping_split_probability',
           'depth_weighted_separation',
           'kernel_curves',
           'laplace_kernel',
           'laplace_limit_mc',
           'simulate_chopping',
           ]

from .limits import (LimitConfig, chopping_split_probability,
                     depth_weighted_separation, kernel_curves, laplace_kernel,
                     laplace_limit_mc, simulate_chopping)
