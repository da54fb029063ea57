"""
Acquisition subpackage: the integrated upper confidence bound over a
posterior ensemble, admissible bounds over boxes and its global maximization
by branch-and-bound, exhaustive cell enumeration or random search.

"""
__all__ = ['AcqConfig',
           'AcqResult',
           'CellLimitError',
           'LeafTable',
           'branch_and_bound',
           'enumerate_cells',
           'exhaustive_oracle',
           'integrated_ucb',
           'leaf_reachability',
           'maximize_acquisition',
           'random_search',
           'ucb_upper_bound',
           ]

from .config import AcqConfig
from .ucb import LeafTable, integrated_ucb, leaf_reachability, ucb_upper_bound
from .optimize import (AcqResult, CellLimitError, branch_and_bound,
                       enumerate_cells, exhaustive_oracle,
                       maximize_acquisition, random_search)
