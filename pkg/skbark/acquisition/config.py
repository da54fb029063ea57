"""
config.py : Acquisition optimizer settings.
"""

OPTIMIZERS = ('branch_and_bound', 'exhaustive', 'random_search')


class AcqConfig(object):
    """
    Settings of the acquisition optimizer.

    Parameters
    ----------
    kappa : float
        Exploration weight of the upper confidence bound, non-negative.
    rel_gap : float
        Relative gap between bound and incumbent at which branch-and-bound
        stops, in [0, 1).
    time_limit : float
        Wall-clock limit in seconds.
    node_limit : int
        Limit on explored branch-and-bound nodes.
    optimizer : {'branch_and_bound', 'exhaustive', 'random_search'}
    probes : int
        Uniform points scored before the search to seed the incumbent,
        together with the training points.
    random_samples : int
        Sample count of the random-search optimizer.
    cell_limit : int
        Largest cell count the exhaustive optimizer will enumerate.
    """
    _fields = ('kappa', 'rel_gap', 'time_limit', 'node_limit', 'optimizer',
               'probes', 'random_samples', 'cell_limit')

    def __init__(self, kappa=1.96, rel_gap=0.1, time_limit=100.,
                 node_limit=100000, optimizer='branch_and_bound', probes=100,
                 random_samples=1000, cell_limit=10 ** 6):
        if kappa < 0:
            raise ValueError("kappa must be non-negative, got {0}.".format(
                kappa))
        if not 0 <= rel_gap < 1:
            raise ValueError("rel_gap must lie in [0, 1), got {0}.".format(
                rel_gap))
        if not time_limit > 0:
            raise ValueError("time_limit must be positive, got {0}.".format(
                time_limit))
        if optimizer not in OPTIMIZERS:
            raise ValueError("optimizer must be one of {0}, got "
                             "'{1}'.".format(OPTIMIZERS, optimizer))
        for name, value in (('node_limit', node_limit),
                            ('random_samples', random_samples),
                            ('cell_limit', cell_limit)):
            if int(value) != value or value < 1:
                raise ValueError("{0} must be a positive integer, got "
                                 "{1}.".format(name, value))
        if int(probes) != probes or probes < 0:
            raise ValueError("probes must be a non-negative integer, got "
                             "{0}.".format(probes))
        self.kappa = float(kappa)
        self.rel_gap = float(rel_gap)
        self.time_limit = float(time_limit)
        self.node_limit = int(node_limit)
        self.optimizer = optimizer
        self.probes = int(probes)
        self.random_samples = int(random_samples)
        self.cell_limit = int(cell_limit)

    def __repr__(self):
        return "AcqConfig({0})".format(', '.join(
            '{0}={1!r}'.format(k, v) for k, v in self.to_dict().items()))

    def __eq__(self, other):
        return (isinstance(other, AcqConfig) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self.__eq__(other)

    def replace(self, **changes):
        spec = self.to_dict()
        spec.update(changes)
        return AcqConfig.from_dict(spec)

    def to_dict(self):
        return dict((k, getattr(self, k)) for k in self._fields)

    @classmethod
    def from_dict(cls, spec):
        unknown = set(spec) - set(cls._fields)
        if unknown:
            raise ValueError("Unknown AcqConfig keys {0}; expected a subset "
                             "of {1}.".format(sorted(unknown),
                                              sorted(cls._fields)))
        return cls(**spec)
