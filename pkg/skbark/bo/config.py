"""
config.py : Settings of the optimization loop.
"""
from ..acquisition import AcqConfig
from ..mcmc import SamplerConfig


DIRECTIONS = ('minimize', 'maximize')


def initial_design_size(D):
    """Default number of initial points, ``min(2 D, 30)``."""
    return min(2 * int(D), 30)


class BoConfig(object):
    """
    Settings of a Bayesian-optimization run.

    Parameters
    ----------
    n_init : int, optional
        Uniform initial points; ``min(2 D, 30)`` when omitted.
    n_iterations : int
        Acquisition-driven evaluations after the initial design.
    sampler : SamplerConfig or dict, optional
    acq : AcqConfig or dict, optional
    seed : int, optional
        Seed of the session random stream.
    direction : {'minimize', 'maximize'}
    """
    _fields = ('n_init', 'n_iterations', 'sampler', 'acq', 'seed',
               'direction')

    def __init__(self, n_init=None, n_iterations=100, sampler=None, acq=None,
                 seed=None, direction='minimize'):
        if n_init is not None and (int(n_init) != n_init or n_init < 1):
            raise ValueError("n_init must be a positive integer, got "
                             "{0}.".format(n_init))
        if int(n_iterations) != n_iterations or n_iterations < 1:
            raise ValueError("n_iterations must be a positive integer, got "
                             "{0}.".format(n_iterations))
        if direction not in DIRECTIONS:
            raise ValueError("direction must be one of {0}, got "
                             "'{1}'.".format(DIRECTIONS, direction))
        if isinstance(sampler, dict):
            sampler = SamplerConfig.from_dict(sampler)
        if isinstance(acq, dict):
            acq = AcqConfig.from_dict(acq)
        self.n_init = None if n_init is None else int(n_init)
        self.n_iterations = int(n_iterations)
        self.sampler = sampler or SamplerConfig()
        self.acq = acq or AcqConfig()
        self.seed = seed
        self.direction = direction

    def __repr__(self):
        return ("BoConfig(n_init={0!r}, n_iterations={1}, direction='{2}', "
                "seed={3!r})".format(self.n_init, self.n_iterations,
                                     self.direction, self.seed))

    def __eq__(self, other):
        return (isinstance(other, BoConfig) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self.__eq__(other)

    @property
    def sign(self):
        """Factor turning the objective into a quantity to maximize."""
        return -1. if self.direction == 'minimize' else 1.

    def init_points(self, D):
        return self.n_init if self.n_init is not None else \
            initial_design_size(D)

    def replace(self, **changes):
        spec = self.to_dict()
        spec.update(changes)
        return BoConfig.from_dict(spec)

    def to_dict(self):
        return {'n_init': self.n_init, 'n_iterations': self.n_iterations,
                'sampler': self.sampler.to_dict(), 'acq': self.acq.to_dict(),
                'seed': self.seed, 'direction': self.direction}

    @classmethod
    def from_dict(cls, spec):
        unknown = set(spec) - set(cls._fields)
        if unknown:
            raise ValueError("Unknown BoConfig keys {0}; expected a subset "
                             "of {1}.".format(sorted(unknown),
                                              sorted(cls._fields)))
        return cls(**spec)
