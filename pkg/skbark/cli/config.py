"""
config.py : Run configuration documents and command-line overrides.
"""
import json
import logging
import os

from ..acquisition import AcqConfig
from ..bo import BoConfig
from ..domain import FeatureSpace
from ..mcmc import SamplerConfig


SECTIONS = ('space', 'sampler', 'acquisition', 'bo', 'benchmark', 'output',
            'seed')
BO_KEYS = ('n_init', 'n_iterations', 'direction')
BENCHMARK_KEYS = ('name', 'seeds', 'method', 'options')
LOG_ENV = 'BARK_LOG'


class ConfigError(ValueError):
    """Malformed run configuration."""
    pass


def _reject_unknown(where, spec, allowed):
    unknown = set(spec) - set(allowed)
    if unknown:
        raise ConfigError("Unknown {0} keys {1}; expected a subset of "
                          "{2}.".format(where, sorted(unknown),
                                        sorted(allowed)))


class RunConfig(object):
    """
    Everything a command needs besides its positional arguments.

    Parameters
    ----------
    space : FeatureSpace, optional
    sampler : SamplerConfig, optional
    acquisition : AcqConfig, optional
    bo : dict, optional
        Loop settings ``n_init``, ``n_iterations`` and ``direction``.
    benchmark : dict, optional
        ``name``, ``seeds`` (number of seeds), ``method`` and ``options``
        (keyword arguments of the benchmark factory).
    output : str, optional
        Output directory.
    seed : int
        Seed of every random stream of the run.
    """

    def __init__(self, space=None, sampler=None, acquisition=None, bo=None,
                 benchmark=None, output=None, seed=0):
        bo = dict(bo or {})
        benchmark = dict(benchmark or {})
        _reject_unknown('bo', bo, BO_KEYS)
        _reject_unknown('benchmark', benchmark, BENCHMARK_KEYS)
        if not isinstance(benchmark.get('options', {}), dict):
            raise ConfigError("benchmark.options must be an object.")
        if seed is None or int(seed) != seed or seed < 0:
            raise ConfigError("seed must be a non-negative integer, got "
                              "{0!r}.".format(seed))
        self.space = space
        self.sampler = sampler or SamplerConfig()
        self.acquisition = acquisition or AcqConfig()
        self.bo = bo
        self.benchmark = benchmark
        self.output = output
        self.seed = int(seed)

    def bo_config(self, seed=None):
        """BoConfig of the loop settings, sampler and acquisition."""
        try:
            return BoConfig(sampler=self.sampler, acq=self.acquisition,
                            seed=self.seed if seed is None else seed,
                            **self.bo)
        except ValueError as e:
            raise ConfigError(str(e))

    def to_dict(self):
        return {'space': None if self.space is None else self.space.to_dict(),
                'sampler': self.sampler.to_dict(),
                'acquisition': self.acquisition.to_dict(),
                'bo': dict(self.bo), 'benchmark': dict(self.benchmark),
                'output': self.output, 'seed': self.seed}

    @classmethod
    def from_dict(cls, spec):
        if not isinstance(spec, dict):
            raise ConfigError("A run configuration must be a JSON object.")
        _reject_unknown('section', spec, SECTIONS)
        try:
            space = spec.get('space')
            return cls(
                space=None if space is None else FeatureSpace.from_dict(space),
                sampler=SamplerConfig.from_dict(spec.get('sampler') or {}),
                acquisition=AcqConfig.from_dict(spec.get('acquisition') or {}),
                bo=spec.get('bo'), benchmark=spec.get('benchmark'),
                output=spec.get('output'), seed=spec.get('seed', 0))
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError) as e:
            raise ConfigError("Invalid run configuration: {0}".format(e))

    @classmethod
    def load(cls, path):
        try:
            with open(path) as f:
                spec = json.load(f)
        except ValueError as e:
            raise ConfigError("{0} is not valid JSON: {1}".format(path, e))
        return cls.from_dict(spec)

    def merge_flags(self, args):
        """
        Apply command-line flags on top of the document.

        Parameters
        ----------
        args : argparse.Namespace
            Flags left at None are ignored.

        Returns
        -------
        config : RunConfig
            A new configuration; flags win over file values.
        """
        sampler, acq = {}, {}
        if getattr(args, 'threads', None) is not None:
            sampler['threads'] = args.threads
        if getattr(args, 'prior_only', False):
            sampler['prior_only'] = True
        if getattr(args, 'data_splits', False):
            sampler['split_sampling'] = 'data'
        for flag, key in (('time_limit', 'time_limit'),
                          ('rel_gap', 'rel_gap'), ('kappa', 'kappa')):
            if getattr(args, flag, None) is not None:
                acq[key] = getattr(args, flag)

        spec = self.to_dict()
        spec['sampler'].update(sampler)
        spec['acquisition'].update(acq)
        if getattr(args, 'seed', None) is not None:
            spec['seed'] = args.seed
        if getattr(args, 'output', None) is not None:
            spec['output'] = args.output
        return RunConfig.from_dict(spec)


def load_space(path):
    """FeatureSpace from a JSON file."""
    with open(path) as f:
        try:
            spec = json.load(f)
        except ValueError as e:
            raise ConfigError("{0} is not valid JSON: {1}".format(path, e))
    try:
        return FeatureSpace.from_dict(spec)
    except (ValueError, TypeError, KeyError) as e:
        raise ConfigError("Invalid space in {0}: {1}".format(path, e))


def configure_logging(environ=None):
    """
    Send log records to stderr at the level named by ``BARK_LOG``.

    Returns
    -------
    level : int
    """
    environ = os.environ if environ is None else environ
    name = environ.get(LOG_ENV, 'WARNING').strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ConfigError("{0}={1!r} is not a log level.".format(
            LOG_ENV, environ.get(LOG_ENV)))
    logging.basicConfig(level=level,
                        format='%(asctime)s %(name)s %(levelname)s: '
                               '%(message)s')
    return level
