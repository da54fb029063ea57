"""
limits.py : Infinite-forest kernel limits and the chopping process.

Two idealized tree generators are studied here. Under Poisson path depths
with splits drawn uniformly on the unit cube, the agreement probability of
two points tends to a Laplace kernel. Under the node-depth prior the
nested "chopping" of [0, 1] gives a different kernel.
"""
import numpy as np
import pandas as pd
from scipy.special import gammaln


class LimitConfig(object):
    """
    Settings of the Poisson-depth Monte Carlo.

    Parameters
    ----------
    lam : float
        Poisson rate of the path depth, positive.
    D : int
        Dimension of the unit cube.
    n_trees : int
        Simulated trees, at least 1000.
    distances : 1d array, optional
        L1 distances at which agreement is estimated. One end of each pair
        is the origin.
    direction : {'diagonal', 'axis'}
        Where the other end lies. 'diagonal' puts ``distance / D`` on every
        coordinate, distances in [0, D]; 'axis' puts the whole distance on
        the first coordinate, distances in [0, 1].
    """
    _fields = ('lam', 'D', 'n_trees', 'distances', 'direction')

    def __init__(self, lam=1., D=1, n_trees=10000, distances=None,
                 direction='diagonal'):
        if not lam > 0:
            raise ValueError("lam must be positive, got {0}.".format(lam))
        if int(D) != D or D < 1:
            raise ValueError("D must be a positive integer, got {0}.".format(
                D))
        if int(n_trees) != n_trees or n_trees < 1000:
            raise ValueError("n_trees must be an integer of at least 1000, "
                             "got {0}.".format(n_trees))
        if direction not in ('diagonal', 'axis'):
            raise ValueError("direction must be 'diagonal' or 'axis', got "
                             "'{0}'.".format(direction))
        reach = D if direction == 'diagonal' else 1
        if distances is None:
            distances = np.linspace(0., reach, 11)
        distances = np.asarray(distances, dtype=float).ravel()
        if np.any(distances < 0) or np.any(distances > reach):
            raise ValueError("{0} distances must lie in [0, {1}].".format(
                direction, reach))
        self.lam = float(lam)
        self.D = int(D)
        self.n_trees = int(n_trees)
        self.distances = distances
        self.direction = direction

    def displacement(self, distance):
        """Coordinates of the far end of the pair at `distance`."""
        if self.direction == 'diagonal':
            return np.full(self.D, distance / self.D)
        delta = np.zeros(self.D)
        delta[0] = distance
        return delta

    def to_dict(self):
        return {'lam': self.lam, 'D': self.D, 'n_trees': self.n_trees,
                'distances': self.distances.tolist(),
                'direction': self.direction}

    @classmethod
    def from_dict(cls, spec):
        unknown = set(spec) - set(cls._fields)
        if unknown:
            raise ValueError("Unknown LimitConfig keys {0}.".format(
                sorted(unknown)))
        return cls(**spec)


def laplace_kernel(distance, lam, D=1):
    """``exp(-lam / D * distance)`` for L1 distances."""
    return np.exp(-lam / D * np.asarray(distance, dtype=float))


def laplace_limit_mc(config=None, rng=None):
    """
    Monte Carlo agreement probability of Poisson-depth random trees.

    Each tree has, along the path shared by the two points, a Poisson(lam)
    number of splits; every split picks a dimension uniformly and a
    threshold uniformly on [0, 1], with no regard to the cell it cuts.

    Parameters
    ----------
    config : LimitConfig, optional
    rng : numpy.random.Generator, optional

    Returns
    -------
    curve : pandas.DataFrame
        Columns distance, empirical, se, laplace; ``laplace`` is
        ``exp(-lam |x - x'|_1 / D)``.
    """
    config = config or LimitConfig()
    rng = rng if rng is not None else np.random.default_rng()
    n, D = config.n_trees, config.D
    depth = rng.poisson(config.lam, size=n)
    owner = np.repeat(np.arange(n), depth)
    dims = rng.integers(D, size=owner.size)
    thresholds = rng.random(owner.size)

    rows = []
    for dist in config.distances:
        delta = config.displacement(dist)
        # The origin goes left of every threshold, so a split on dimension j
        # separates the pair iff its threshold falls below delta[j]
        cuts = thresholds < delta[dims]
        separated = np.bincount(owner[cuts], minlength=n) > 0
        p = 1. - separated.mean()
        rows.append({'distance': dist, 'empirical': p,
                     'se': np.sqrt(p * (1. - p) / n),
                     'laplace': float(laplace_kernel(dist, config.lam, D))})
    return pd.DataFrame(rows, columns=['distance', 'empirical', 'se',
                                       'laplace'])


def chopping_split_probability(x, d):
    """
    Probability that the d-th chop is the first to separate x from 0.

    The chopping process cuts [0, 1] at a uniform point, keeps the part
    containing 0 and repeats.

    Parameters
    ----------
    x : float or array, in (0, 1)
    d : int, at least 1

    Returns
    -------
    p : float or array
        ``x (-log x)^(d-1) / (d-1)!``.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0) or np.any(x_arr >= 1):
        raise ValueError("x must lie in (0, 1), got {0}.".format(x))
    if int(d) != d or d < 1:
        raise ValueError("d must be a positive integer, got {0}.".format(d))
    logp = (np.log(x_arr) + (d - 1) * np.log(-np.log(x_arr)) -
            gammaln(d))
    p = np.exp(logp)
    return float(p) if np.ndim(x) == 0 else p


def simulate_chopping(x, max_depth, n, rng=None):
    """
    Monte Carlo estimate of `chopping_split_probability` for d = 1 to
    `max_depth`.

    Returns
    -------
    freq : 1d array, length max_depth
        Share of `n` simulated processes whose first chop inside [0, x]
        is the d-th.
    """
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1), got {0}.".format(x))
    rng = rng if rng is not None else np.random.default_rng()
    ends = np.cumprod(rng.random((int(n), int(max_depth))), axis=1)
    inside = ends <= x
    first = np.argmax(inside, axis=1)
    hit = inside.any(axis=1)
    return np.bincount(first[hit], minlength=max_depth)[:max_depth] / \
        float(n)


def depth_weighted_separation(x, alpha, beta, max_depth=50, variant='i'):
    """
    Probability that x is separated from 0 under depth-limited chopping.

    The d-th chop happens only if every level up to d splits, so each
    chopping term is weighted by a product of split probabilities
    ``pi(i) = alpha (1 + i)^-beta``.

    Parameters
    ----------
    x : float, in (0, 1)
    alpha, beta : float
        Node-depth prior; ``alpha`` in [0, 1].
    max_depth : int
        Last series term.
    variant : {'i', 'd'}
        'i' weights the d-th term by ``prod_{i=1..d} pi(i)``; 'd' by
        ``pi(d)^d``.

    Returns
    -------
    separation : float
        One minus the kernel value k(0, x).
    """
    if variant not in ('i', 'd'):
        raise ValueError("variant must be 'i' or 'd', got '{0}'.".format(
            variant))
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1], got {0}.".format(alpha))
    if alpha == 0:
        return 0.
    depths = np.arange(1, int(max_depth) + 1)
    chops = np.array([chopping_split_probability(x, d) for d in depths])
    log_pi = np.log(alpha) - beta * np.log1p(depths)
    if variant == 'i':
        log_weight = np.cumsum(log_pi)
    else:
        log_weight = depths * log_pi
    return float(np.sum(chops * np.exp(log_weight)))


def kernel_curves(xs, alpha=0.95, beta=2., max_depth=50):
    """
    Chopping kernel next to the Laplace kernel of the same root split rate.

    Parameters
    ----------
    xs : 1d array
        Points in (0, 1).
    alpha, beta : float
    max_depth : int

    Returns
    -------
    curves : pandas.DataFrame
        Columns x, k_true, k_true_pi_d, k_laplace. ``k_true`` uses the
        product over depths, ``k_true_pi_d`` the power of the last depth,
        ``k_laplace`` is ``exp(-lam x)`` with ``lam = -log(1 - alpha)``.
    """
    xs = np.asarray(xs, dtype=float).ravel()
    lam = -np.log1p(-alpha)
    k_i = [1. - depth_weighted_separation(x, alpha, beta, max_depth, 'i')
           for x in xs]
    k_d = [1. - depth_weighted_separation(x, alpha, beta, max_depth, 'd')
           for x in xs]
    return pd.DataFrame({'x': xs, 'k_true': k_i, 'k_true_pi_d': k_d,
                         'k_laplace': laplace_kernel(xs, lam)},
                        columns=['x', 'k_true', 'k_true_pi_d', 'k_laplace'])

