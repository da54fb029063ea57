"""
Gaussian process subpackage: the forest kernel, GP states with cached
factorizations and low-rank tree updates, and the mixture predictive of a
sampled ensemble.

"""
__all__ = ['Candidate',
           'FactorizationError',
           'GpState',
           'PosteriorEnsemble',
           'PredictiveGaussian',
           'cross',
           'factorize',
           'gram',
           'kernel',
           'marginal_log_likelihood',
           'membership_blocks',
           'mixture_mse',
           'mixture_nlpd',
           'predict',
           'predict_mean_by_leaf_sums',
           'update_noise',
           'update_tree_lowrank',
           'woodbury_update',
           ]

from .kernel import cross, gram, kernel, membership_blocks
from .linalg import FactorizationError, factorize, woodbury_update
from .state import (Candidate, GpState, PredictiveGaussian,
                    marginal_log_likelihood, predict,
                    predict_mean_by_leaf_sums, update_noise,
                    update_tree_lowrank)
from .ensemble import PosteriorEnsemble, mixture_mse, mixture_nlpd
