"""
functions.py : Synthetic benchmark objectives.

Every objective takes an encoded point (1d array) and returns a float to be
minimized. Objectives are deterministic given their seed.
"""
import numpy as np

from ..acquisition.ucb import branching_rule, leaf_reachability
from ..domain import Categorical, Continuous, FeatureSpace, Integer
from ..forest import sample_forest_prior


class Benchmark(object):
    """
    A named objective over a feature space.

    Parameters
    ----------
    name : str
    space : FeatureSpace
    objective : callable
        Maps a validated encoded point to a float.
    optimum : float, optional
        Global minimum, when known.
    forest, leaf_values : optional
        Generating forest and per-tree leaf values of tree-sampled
        objectives.
    """

    def __init__(self, name, space, objective, optimum=None, forest=None,
                 leaf_values=None):
        self.name = name
        self.space = space
        self.objective = objective
        self.optimum = optimum
        self.forest = forest
        self.leaf_values = leaf_values

    def __repr__(self):
        return "Benchmark('{0}', D={1}, optimum={2!r})".format(
            self.name, self.space.D, self.optimum)

    def __call__(self, x):
        x = self.space.check_points(x)
        if x.shape[0] != 1:
            raise ValueError("Expected a single point, got {0}.".format(
                x.shape[0]))
        return float(self.objective(x[0]))

    def evaluate(self, X):
        """Objective at each row of `X`."""
        X = self.space.check_points(X)
        return np.array([self.objective(x) for x in X])


def forest_minimum(forest, leaf_values, space):
    """
    Exact minimum of a sum of per-tree leaf values.

    Depth-first branch-and-bound over boxes; a box's lower bound adds each
    tree's smallest reachable leaf value.

    Parameters
    ----------
    forest : Forest
    leaf_values : list of 1d array
        Value of every leaf, one array per tree.
    space : FeatureSpace

    Returns
    -------
    x : 1d array
        A minimizer.
    value : float
    """
    best_x, best = None, np.inf
    stack = [space.full_box()]
    while stack:
        box = stack.pop()
        reach = [sorted(leaf_reachability(tree, box)) for tree in forest]
        low = sum(values[r].min() for values, r in zip(leaf_values, reach))
        if low >= best:
            continue
        open_trees = [t for t, r in enumerate(reach) if len(r) > 1]
        if not open_trees:
            best_x, best = box.representative(), low
            continue
        t = max(open_trees, key=lambda t: np.ptp(leaf_values[t][reach[t]]))
        stack.extend(box.split(branching_rule(forest[t], box)))
    return best_x, float(best)


def make_tree_function(space, seed=0, n_trees=20, alpha=0.95, beta=2.,
                       name='tree-function', exact_optimum=True):
    """
    Objective sampled from the sum-of-trees prior.

    Parameters
    ----------
    space : FeatureSpace
    seed : int
    n_trees : int
        Generating trees; leaf values are drawn from
        ``Normal(0, 1 / n_trees)``.
    alpha, beta : float
        Node-depth prior of the generating trees.
    name : str
    exact_optimum : bool
        Compute the global minimum by branch-and-bound over the generating
        forest.

    Returns
    -------
    benchmark : Benchmark
    """
    rng = np.random.default_rng(seed)
    forest = sample_forest_prior(space, n_trees, alpha, beta, rng)
    scale = np.sqrt(1. / n_trees)
    values = [rng.normal(0., scale, size=tree.n_leaves) for tree in forest]

    def objective(x):
        ids = forest.leaf_indices(x[np.newaxis, :])[0]
        return float(sum(v[i] for v, i in zip(values, ids)))

    optimum = None
    if exact_optimum:
        optimum = forest_minimum(forest, values, space)[1]
    return Benchmark(name, space, objective, optimum, forest, values)


def tree_function(seed=0, D=10, n_trees=20, **kwargs):
    """Tree-sampled objective on ``[0, 1]^D``."""
    space = FeatureSpace([Continuous(0., 1.) for _ in range(D)])
    return make_tree_function(space, seed, n_trees, **kwargs)


def tree_function_cat(seed=0, d_cont=10, d_cat=10, n_categories=5,
                      n_trees=20, **kwargs):
    """
    Tree-sampled objective on ``[0, 1]^d_cont`` times `d_cat` categorical
    features with labels '1' to `n_categories`.
    """
    labels = [str(k + 1) for k in range(n_categories)]
    space = FeatureSpace([Continuous(0., 1.) for _ in range(d_cont)] +
                         [Categorical(n_categories, labels)
                          for _ in range(d_cat)])
    kwargs.setdefault('name', 'tree-function-cat')
    return make_tree_function(space, seed, n_trees, **kwargs)


def ackley(z, a=20., b=0.2, c=2 * np.pi):
    z = np.asarray(z, dtype=float)
    d = z.size
    return float(-a * np.exp(-b * np.sqrt(np.sum(z ** 2) / d)) -
                 np.exp(np.sum(np.cos(c * z)) / d) + a + np.e)


def rosenbrock(z):
    z = np.asarray(z, dtype=float)
    return float(np.sum(100. * (z[1:] - z[:-1] ** 2) ** 2 +
                        (z[:-1] - 1.) ** 2))


def _level_decoder(n_cont, levels):
    # Integer features index into their level lists
    def decode(x):
        ints = [lv[int(i)] for lv, i in zip(levels, x[n_cont:])]
        return np.concatenate([x[:n_cont], ints])
    return decode


def discrete_ackley(seed=0, d_cont=3, d_int=10):
    """
    Ackley on ``[-1, 1]^d_cont`` times ``{-1, 1}^d_int``.

    Integer features hold level indices 0 and 1 for the values -1 and 1.
    The `seed` is unused; the objective is fixed.
    """
    features = ([Continuous(-1., 1.) for _ in range(d_cont)] +
                [Integer(0, 1) for _ in range(d_int)])
    decode = _level_decoder(d_cont, [[-1, 1]] * d_int)
    space = FeatureSpace(features)

    def objective(x):
        return ackley(decode(x))

    # Every integer value has magnitude 1; the continuous part is best at 0
    optimum = objective(np.r_[np.zeros(d_cont), np.ones(d_int)])
    return Benchmark('discrete-ackley', space, objective, optimum)


def discrete_rosenbrock(seed=0, d_cont=4, d_int=6):
    """
    Rosenbrock on ``[-5, 10]^d_cont`` times ``{-5, 0, 5, 10}^d_int``.

    Integer features hold level indices 0 to 3. The global minimum over
    the mixed domain is not known in closed form.
    """
    features = ([Continuous(-5., 10.) for _ in range(d_cont)] +
                [Integer(0, 3) for _ in range(d_int)])
    decode = _level_decoder(d_cont, [[-5, 0, 5, 10]] * d_int)
    space = FeatureSpace(features)

    def objective(x):
        return rosenbrock(decode(x))

    return Benchmark('discrete-rosenbrock', space, objective, None)


HARTMANN6_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
HARTMANN6_A = np.array([[10, 3, 17, 3.5, 1.7, 8],
                        [0.05, 10, 17, 0.1, 8, 14],
                        [3, 3.5, 1.7, 10, 17, 8],
                        [17, 8, 0.05, 10, 0.1, 14]])
HARTMANN6_P = 1e-4 * np.array([[1312, 1696, 5569, 124, 8283, 5886],
                               [2329, 4135, 8307, 3736, 1004, 9991],
                               [2348, 1451, 3522, 2883, 3047, 6650],
                               [4047, 8828, 8732, 5743, 1091, 381]])


def hartmann6(seed=0):
    """Six-dimensional Hartmann function on ``[0, 1]^6``."""
    space = FeatureSpace([Continuous(0., 1.) for _ in range(6)])

    def objective(x):
        inner = np.sum(HARTMANN6_A * (x[np.newaxis, :] - HARTMANN6_P) ** 2,
                       axis=1)
        return float(-np.sum(HARTMANN6_ALPHA * np.exp(-inner)))

    return Benchmark('hartmann6', space, objective, -3.32237)


def styblinski_tang(seed=0, D=10):
    """Styblinski-Tang function on ``[-5, 5]^D``."""
    space = FeatureSpace([Continuous(-5., 5.) for _ in range(D)])

    def objective(x):
        return float(0.5 * np.sum(x ** 4 - 16 * x ** 2 + 5 * x))

    return Benchmark('styblinski-tang', space, objective, -39.16599 * D)


BENCHMARKS = {'tree-function': tree_function,
              'tree-function-cat': tree_function_cat,
              'discrete-ackley': discrete_ackley,
              'discrete-rosenbrock': discrete_rosenbrock,
              'hartmann6': hartmann6,
              'styblinski-tang': styblinski_tang}


def make_benchmark(name, seed=0, **kwargs):
    """
    Build a registered benchmark.

    Parameters
    ----------
    name : str
        Key of `BENCHMARKS`.
    seed : int
    **kwargs
        Size arguments of the factory, e.g. ``D`` for 'tree-function'.
    """
    if name not in BENCHMARKS:
        raise ValueError("Unknown benchmark '{0}'; choose from {1}.".format(
            name, sorted(BENCHMARKS)))
    return BENCHMARKS[name](seed=seed, **kwargs)
