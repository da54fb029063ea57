"""
MCMC subpackage: Metropolis-Hastings sampling of the forest kernel and the
noise variance, with grow/prune/change tree moves, an inverse-gamma noise
prior and a softplus-transformed noise walk.

"""
__all__ = ['ChainState',
           'NoisePrior',
           'SamplerConfig',
           'autocorrelation',
           'change_ratios',
           'effective_sample_size',
           'grow_ratios',
           'mh_step',
           'noise_log_prior_ratio',
           'noise_log_transition_ratio',
           'prune_ratios',
           'run_chains',
           'softplus',
           'softplus_inv',
           'solve_noise_scale',
           ]

from .config import SamplerConfig
from .ratios import (NoisePrior, change_ratios, grow_ratios,
                     noise_log_prior_ratio, noise_log_transition_ratio,
                     prune_ratios, softplus, softplus_inv, solve_noise_scale)
from .sampler import (ChainState, autocorrelation, effective_sample_size,
                      mh_step, run_chains)
