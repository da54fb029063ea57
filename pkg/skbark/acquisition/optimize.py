"""
optimize.py : Global maximization of the integrated UCB.

The acquisition is piecewise constant on the cells cut out by the leaves
of every sampled tree. Branch-and-bound searches boxes best-first, bounding
each box through the leaves it can still reach.
"""
import heapq
import logging
import time

import numpy as np

from ..domain import sample_uniform
from .config import AcqConfig
from .ucb import LeafTable, branching_rule, integrated_ucb


logger = logging.getLogger(__name__)

STATUSES = ('optimal_within_gap', 'time_limit', 'node_limit', 'exhaustive',
            'random_search')
TIE_TOL = 1e-12


class CellLimitError(RuntimeError):
    """Raised when a cell enumeration would exceed its limit."""
    pass


class AcqResult(object):
    """
    Outcome of an acquisition optimization.

    Attributes
    ----------
    x_best : 1d array
        Maximizer, in encoded coordinates.
    value : float
        Integrated UCB at `x_best`.
    proven_gap : float
        Relative gap between the best remaining bound and `value`, 0 when
        optimality is proven, NaN for random search.
    nodes_explored : int
    wall_time : float
        Seconds.
    status : str
        One of 'optimal_within_gap', 'time_limit', 'node_limit',
        'exhaustive', 'random_search'.
    """

    def __init__(self, x_best, value, proven_gap, nodes_explored, wall_time,
                 status):
        self.x_best = np.asarray(x_best, dtype=float)
        self.value = float(value)
        self.proven_gap = float(proven_gap)
        self.nodes_explored = int(nodes_explored)
        self.wall_time = float(wall_time)
        self.status = status

    def __repr__(self):
        return ("AcqResult(value={0:.6g}, gap={1:.3g}, nodes={2}, "
                "status='{3}')".format(self.value, self.proven_gap,
                                       self.nodes_explored, self.status))

    def to_dict(self):
        return {'x': self.x_best.tolist(), 'value': self.value,
                'gap': self.proven_gap, 'nodes': self.nodes_explored,
                'time': self.wall_time, 'status': self.status}


class _Incumbent(object):
    # Best point so far; ties go to the lexicographically smallest point

    def __init__(self):
        self.x = None
        self.value = -np.inf

    def offer(self, x, value):
        if self.x is None or value > self.value + TIE_TOL:
            better = True
        elif abs(value - self.value) <= TIE_TOL:
            better = tuple(x) < tuple(self.x)
        else:
            better = False
        if better:
            self.x, self.value = np.array(x, dtype=float), float(value)
        return better

    def offer_many(self, X, values):
        for x, v in zip(X, values):
            self.offer(x, v)


def _relative_gap(bound, value):
    return max(bound - value, 0.) / max(abs(value), 1e-6)


def branch_and_bound(ensemble, space, config=None, rng=None):
    """
    Best-first branch-and-bound over boxes of the domain.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    space : FeatureSpace
    config : AcqConfig, optional
    rng : numpy.random.Generator, optional
        Draws the probe points that seed the incumbent.

    Returns
    -------
    result : AcqResult

    Notes
    -----
    Each popped box has its representative point scored as a candidate
    incumbent. Boxes where every tree reaches a single leaf lie inside one
    cell and are closed. Otherwise the box is split by the shallowest rule,
    reachable on both sides, of the tree whose reachable leaf weights spread
    the most. The search stops once the largest open bound is within
    ``rel_gap * max(|incumbent|, 1e-6)`` of the incumbent.
    """
    config = config or AcqConfig()
    rng = rng if rng is not None else np.random.default_rng()
    start = time.perf_counter()
    kappa = config.kappa
    table = LeafTable(ensemble)
    inc = _Incumbent()

    root = space.full_box()
    # Seed the incumbent with the root point, training points and probes
    probes = [root.representative()[np.newaxis, :], ensemble.dataset.X]
    if config.probes:
        probes.append(sample_uniform(space, config.probes, rng))
    X = np.vstack(probes)
    inc.offer_many(X, integrated_ucb(ensemble, X, kappa))

    mask = table.mask(root)
    counter = 0
    heap = [(-table.bound(mask, kappa), counter, root, mask)]
    nodes = 0
    status = 'optimal_within_gap'
    best_open = -np.inf

    while heap:
        neg_bound, _, box, mask = heapq.heappop(heap)
        bound = -neg_bound
        if bound - inc.value <= config.rel_gap * max(abs(inc.value), 1e-6):
            best_open = bound
            break
        if nodes >= config.node_limit:
            status, best_open = 'node_limit', bound
            break
        if time.perf_counter() - start > config.time_limit:
            status, best_open = 'time_limit', bound
            break
        nodes += 1

        x = box.representative()
        inc.offer(x, integrated_ucb(ensemble, x, kappa))

        counts = table.reach_counts(mask)
        if (counts <= 1).all():
            continue
        spread = np.where(counts > 1, table.tree_spread(mask), -np.inf)
        # Ties between equal spreads go to the first flattened tree
        rule = branching_rule(table.trees[int(np.argmax(spread))], box)
        for go_left in (True, False):
            child = box.restrict(rule, go_left)
            child_mask = mask & table.feature_mask(child, rule.feature)
            child_counts = table.reach_counts(child_mask)
            if (child_counts == 0).any():
                continue
            child_bound = table.bound(child_mask, kappa, child_counts)
            if child_bound <= inc.value:
                continue
            counter += 1
            heapq.heappush(heap, (-child_bound, counter, child, child_mask))

    gap = _relative_gap(best_open, inc.value)
    elapsed = time.perf_counter() - start
    logger.info("Branch-and-bound: value %.6g, gap %.3g, %d nodes, %.2fs, %s.",
                inc.value, gap, nodes, elapsed, status)
    return AcqResult(inc.x, inc.value, gap, nodes, elapsed, status)


def enumerate_cells(trees, space, limit=10 ** 6):
    """
    Nonempty intersections of one leaf from each tree.

    Parameters
    ----------
    trees : sequence of Tree
    space : FeatureSpace
    limit : int
        Largest number of cells to build.

    Returns
    -------
    cells : list of Box
        Disjoint boxes covering the domain, on each of which every tree
        routes to a single leaf.

    Raises
    ------
    CellLimitError
        If more than `limit` cells would be built.
    """
    cells = [space.full_box()]
    for tree in trees:
        refined = []
        for cell in cells:
            for leaf in tree.leaves:
                piece = cell.intersect(leaf.box)
                if not piece.is_empty():
                    refined.append(piece)
            if len(refined) > limit:
                raise CellLimitError("More than {0} cells; use "
                                     "branch_and_bound instead.".format(limit))
        cells = refined
    return cells


def exhaustive_oracle(ensemble, space, kappa=1.96, limit=10 ** 6):
    """
    Exact maximizer by scoring one point in every cell.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    space : FeatureSpace
    kappa : float
    limit : int
        Cell limit, see `enumerate_cells`.

    Returns
    -------
    result : AcqResult
        Status 'exhaustive', gap 0, ``nodes_explored`` the cell count.
    """
    start = time.perf_counter()
    trees = [tree for state in ensemble.states for tree in state.forest]
    cells = enumerate_cells(trees, space, limit)
    X = np.array([cell.representative() for cell in cells])
    inc = _Incumbent()
    inc.offer_many(X, integrated_ucb(ensemble, X, kappa))
    return AcqResult(inc.x, inc.value, 0., len(cells),
                     time.perf_counter() - start, 'exhaustive')


def random_search(ensemble, space, n_samples=1000, rng=None, kappa=1.96):
    """
    Best of `n_samples` uniform points.

    Returns
    -------
    result : AcqResult
        Status 'random_search' and a NaN gap.
    """
    rng = rng if rng is not None else np.random.default_rng()
    start = time.perf_counter()
    X = sample_uniform(space, n_samples, rng)
    inc = _Incumbent()
    inc.offer_many(X, integrated_ucb(ensemble, X, kappa))
    return AcqResult(inc.x, inc.value, np.nan, n_samples,
                     time.perf_counter() - start, 'random_search')


def maximize_acquisition(ensemble, space, config=None, rng=None):
    """
    Maximize the integrated UCB with the configured optimizer.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    space : FeatureSpace
    config : AcqConfig, optional
    rng : numpy.random.Generator, optional

    Returns
    -------
    result : AcqResult
    """
    config = config or AcqConfig()
    if config.optimizer == 'exhaustive':
        return exhaustive_oracle(ensemble, space, config.kappa,
                                 config.cell_limit)
    if config.optimizer == 'random_search':
        return random_search(ensemble, space, config.random_samples, rng,
                             config.kappa)
    return branch_and_bound(ensemble, space, config, rng)
