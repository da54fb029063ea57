"""
scikit-bark (a.k.a. `skbark`): Bayesian optimization with tree kernels.

This package fits Gaussian-process surrogates whose kernel is a forest of
decision trees sampled from its posterior, and optimizes mixed continuous,
integer and categorical domains with them.

Most of the functionality is actually located in subpackages, but like numpy we
bring most of the core functionality into the base namespace.

Recommended Use
---------------
>>> import skbark as bark

"""
__all__ = []

__version__ = '0.1.0'

######################
# Subpackage imports #
######################

# Feature spaces, boxes and datasets
import skbark.domain as _domain
from skbark.domain import *
__all__.extend(_domain.__all__)

# Decision trees, forests and the tree prior
import skbark.forest as _forest
from skbark.forest import *
__all__.extend(_forest.__all__)

# Forest kernel and Gaussian-process states
import skbark.gp as _gp
from skbark.gp import *
__all__.extend(_gp.__all__)

# Metropolis-Hastings sampling of forests and noise
import skbark.mcmc as _mcmc
from skbark.mcmc import *
__all__.extend(_mcmc.__all__)

# Integrated UCB and its global maximization
import skbark.acquisition as _acquisition
from skbark.acquisition import *
__all__.extend(_acquisition.__all__)

# Ask/tell optimization sessions
import skbark.bo as _bo
from skbark.bo import *
__all__.extend(_bo.__all__)

# Benchmarks and evaluation
import skbark.bench as _bench
from skbark.bench import *
__all__.extend(_bench.__all__)

# Kernel limits of infinite random forests
import skbark.analysis as _analysis
from skbark.analysis import *
__all__.extend(_analysis.__all__)

# Command line
import skbark.cli as _cli
from skbark.cli import *
__all__.extend(_cli.__all__)

# Enable testing of the package
import os.path as osp

pkg_dir = osp.abspath(osp.dirname(__file__))


def _test(verbose=False):
    """Run all unit tests."""
    try:
        import pytest
    except ImportError:
        raise ImportError("Could not load pytest. Unit tests not available.")
    args = [pkg_dir]
    if verbose:
        args.extend(['-v', '-s'])
    # Return sys.exit code
    return int(pytest.main(args))


# do not use `test` as function name as pytest would collect it
test = _test
