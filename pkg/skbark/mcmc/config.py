"""
config.py : Sampler settings.
"""


def _check_keys(cls, spec, allowed):
    unknown = set(spec) - set(allowed)
    if unknown:
        raise ValueError("Unknown {0} keys {1}; expected a subset of "
                         "{2}.".format(cls.__name__, sorted(unknown),
                                       sorted(allowed)))


class SamplerConfig(object):
    """
    Settings of the Metropolis-Hastings sampler.

    Parameters
    ----------
    alpha, beta : float
        Node-depth prior, split probability ``alpha * (1 + d) ** -beta``.
    nu, q : float
        Noise prior: inverse gamma with ``Pr(noise_var < 1) = q``.
    m : int
        Number of trees.
    chains : int
        Independent chains.
    burn_in : int
        Discarded sweeps per chain when not warm started.
    samples_per_chain : int
        Sweeps per chain after burn-in.
    thin : int
        Keep every `thin`-th sweep; ``samples_per_chain // thin`` states are
        kept per chain.
    noise_walk_sd : float
        Step size of the Gaussian walk on the softplus-inverse of the noise.
    move_weights : tuple of 3 floats
        Selection weights of (grow, prune, change); grow and prune must be
        equal.
    split_sampling : {'uniform', 'data'}
        Draw split rules uniformly from the node's box, or from the observed
        values inside it.
    prior_only : bool
        Draw every state from the prior, with no MH steps.
    init : {'stump', 'prior'}
        Initial trees of a cold-started chain: single leaves or prior draws.
    refresh_every : int
        Accepted low-rank updates between full refactorizations.
    threads : int or None
        Worker threads running chains; None uses one per chain.

    Notes
    -----
    A sweep is one proposal per tree followed by one noise proposal.
    """
    _fields = ('alpha', 'beta', 'nu', 'q', 'm', 'chains', 'burn_in',
               'samples_per_chain', 'thin', 'noise_walk_sd', 'move_weights',
               'split_sampling', 'prior_only', 'init', 'refresh_every',
               'threads')

    def __init__(self, alpha=0.95, beta=2., nu=3., q=0.9, m=50, chains=4,
                 burn_in=1000, samples_per_chain=400, thin=100,
                 noise_walk_sd=0.5, move_weights=(0.25, 0.25, 0.5),
                 split_sampling='uniform', prior_only=False, init='stump',
                 refresh_every=50, threads=None):
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1), got {0}.".format(
                alpha))
        if beta < 0:
            raise ValueError("beta must be non-negative, got {0}.".format(
                beta))
        if not nu > 0:
            raise ValueError("nu must be positive, got {0}.".format(nu))
        if not 0 < q < 1:
            raise ValueError("q must lie in (0, 1), got {0}.".format(q))
        for name, value in (('m', m), ('chains', chains),
                            ('samples_per_chain', samples_per_chain),
                            ('thin', thin), ('refresh_every', refresh_every)):
            if int(value) != value or value < 1:
                raise ValueError("{0} must be a positive integer, got "
                                 "{1}.".format(name, value))
        if int(burn_in) != burn_in or burn_in < 0:
            raise ValueError("burn_in must be a non-negative integer, got "
                             "{0}.".format(burn_in))
        if thin > samples_per_chain:
            raise ValueError("thin ({0}) exceeds samples_per_chain "
                             "({1}).".format(thin, samples_per_chain))
        if not noise_walk_sd > 0:
            raise ValueError("noise_walk_sd must be positive, got "
                             "{0}.".format(noise_walk_sd))
        move_weights = tuple(float(w) for w in move_weights)
        if len(move_weights) != 3 or min(move_weights) < 0:
            raise ValueError("move_weights must be 3 non-negative numbers, "
                             "got {0}.".format(move_weights))
        if move_weights[0] != move_weights[1] or move_weights[0] == 0:
            raise ValueError("Grow and prune weights must be equal and "
                             "positive, got {0}.".format(move_weights))
        if split_sampling not in ('uniform', 'data'):
            raise ValueError("split_sampling must be 'uniform' or 'data', "
                             "got '{0}'.".format(split_sampling))
        if init not in ('stump', 'prior'):
            raise ValueError("init must be 'stump' or 'prior', got "
                             "'{0}'.".format(init))
        if threads is not None and (int(threads) != threads or threads < 1):
            raise ValueError("threads must be a positive integer, got "
                             "{0}.".format(threads))

        total = sum(move_weights)
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.nu = float(nu)
        self.q = float(q)
        self.m = int(m)
        self.chains = int(chains)
        self.burn_in = int(burn_in)
        self.samples_per_chain = int(samples_per_chain)
        self.thin = int(thin)
        self.noise_walk_sd = float(noise_walk_sd)
        self.move_weights = tuple(w / total for w in move_weights)
        self.split_sampling = split_sampling
        self.prior_only = bool(prior_only)
        self.init = init
        self.refresh_every = int(refresh_every)
        self.threads = None if threads is None else int(threads)

    @property
    def kept_per_chain(self):
        return self.samples_per_chain // self.thin

    @property
    def n_samples(self):
        """Total states kept over all chains."""
        return self.chains * self.kept_per_chain

    def __repr__(self):
        return "SamplerConfig({0})".format(', '.join(
            '{0}={1!r}'.format(k, v) for k, v in self.to_dict().items()))

    def __eq__(self, other):
        return (isinstance(other, SamplerConfig) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self.__eq__(other)

    def replace(self, **changes):
        """Copy with some settings changed."""
        spec = self.to_dict()
        spec.update(changes)
        return SamplerConfig.from_dict(spec)

    def to_dict(self):
        spec = dict((k, getattr(self, k)) for k in self._fields)
        spec['move_weights'] = list(self.move_weights)
        return spec

    @classmethod
    def from_dict(cls, spec):
        _check_keys(cls, spec, cls._fields)
        return cls(**spec)
