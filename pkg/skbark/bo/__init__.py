"""
Bayesian-optimization subpackage: loop settings, the persistent ask/tell
session and the full initialize/ask/evaluate/tell loop.

"""
__all__ = ['BoConfig',
           'BoSession',
           'TRACE_COLUMNS',
           'WarmStart',
           'ask',
           'initial_design_size',
           'initialize',
           'run_loop',
           'tell',
           ]

from .config import BoConfig, initial_design_size
from .session import (TRACE_COLUMNS, BoSession, WarmStart, ask, initialize,
                      run_loop, tell)
