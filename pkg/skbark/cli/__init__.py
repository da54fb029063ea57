"""
Command-line subpackage: the ``skbark`` command with its fit, optimize,
ask/tell, prior and verify subcommands, and the run configuration
documents they read.

"""
__all__ = ['CHECKS',
           'ConfigError',
           'RunConfig',
           'build_parser',
           'configure_logging',
           'load_space',
           'main',
           'run_checks',
           'verify_chopping',
           'verify_kernel_limit',
           'verify_lowrank',
           'verify_oracle',
           ]

from .config import ConfigError, RunConfig, configure_logging, load_space
from .verify import (CHECKS, run_checks, verify_chopping, verify_kernel_limit,
                     verify_lowrank, verify_oracle)
from .commands import build_parser, main
