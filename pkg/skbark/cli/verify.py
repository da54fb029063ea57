"""
verify.py : Self-checks of the kernel limits, the low-rank updates and the
acquisition optimizer.

Every check returns a JSON-serializable report with a boolean ``passed``
and a dict of DataFrames holding the curves behind it.
"""
import logging
import time

import numpy as np
import pandas as pd

from ..acquisition import AcqConfig, branch_and_bound, exhaustive_oracle
from ..analysis import (LimitConfig, chopping_split_probability,
                        kernel_curves, laplace_limit_mc, simulate_chopping)
from ..domain import (Categorical, Continuous, FeatureSpace, Integer,
                      sample_uniform, standardize)
from ..forest import sample_forest_prior, sample_rule
from ..gp import GpState, PosteriorEnsemble, factorize, gram


logger = logging.getLogger(__name__)

LOG_2PI = np.log(2 * np.pi)


def _within(diff, se, n_se):
    return bool(np.all(np.abs(diff) <= n_se * se + 1e-12))


def verify_kernel_limit(seed=0, n_trees=10000, settings=((1., 1), (2., 3)),
                        axis_settings=((2., 3),), n_se=5.):
    """
    Poisson-depth agreement against the Laplace kernel.

    Parameters
    ----------
    seed : int
    n_trees : int
    settings : sequence of (lam, D)
        Pairs displaced along the diagonal.
    axis_settings : sequence of (lam, D)
        Pairs displaced along a single axis.
    n_se : float
        Tolerance in standard errors.
    """
    rng = np.random.default_rng(seed)
    frames = []
    runs = ([(lam, D, 'diagonal') for lam, D in settings] +
            [(lam, D, 'axis') for lam, D in axis_settings])
    for lam, D, direction in runs:
        config = LimitConfig(lam, D, n_trees, direction=direction)
        curve = laplace_limit_mc(config, rng)
        curve.insert(0, 'direction', direction)
        curve.insert(0, 'D', D)
        curve.insert(0, 'lam', lam)
        frames.append(curve)
    curve = pd.concat(frames, ignore_index=True)
    diff = (curve['empirical'] - curve['laplace']).to_numpy()
    se = curve['se'].to_numpy()
    z = np.where(diff == 0, 0., np.abs(diff) / np.maximum(se, 1e-300))
    return {'check': 'kernel-limit', 'passed': _within(diff, se, n_se),
            'n_trees': n_trees, 'max_z': float(z.max())}, \
        {'kernel_limit': curve}


def verify_chopping(seed=0, n=100000, max_depth=6, xs=(0.1, 0.3, 0.5, 0.9),
                    n_se=5., alpha=0.95, beta=2.):
    """
    Monte Carlo chopping frequencies, series normalization and the gap
    between the depth-weighted and Laplace kernels.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for x in xs:
        freq = simulate_chopping(x, max_depth, n, rng)
        for d in range(1, max_depth + 1):
            p = chopping_split_probability(x, d)
            rows.append({'x': x, 'd': d, 'empirical': freq[d - 1],
                         'closed_form': p,
                         'se': np.sqrt(p * (1. - p) / n)})
    mc = pd.DataFrame(rows, columns=['x', 'd', 'empirical', 'closed_form',
                                     'se'])
    mc_ok = _within(mc['empirical'] - mc['closed_form'], mc['se'], n_se)

    totals = [sum(chopping_split_probability(x, d) for d in range(1, 201))
              for x in xs]
    norm_err = float(np.max(np.abs(np.array(totals) - 1.)))

    curves = kernel_curves(np.linspace(0.01, 0.99, 99), alpha, beta)
    sup = float(np.max(np.abs(curves['k_true'] - curves['k_laplace'])))

    report = {'check': 'chopping',
              'passed': bool(mc_ok and norm_err <= 1e-12 and sup > 0.05),
              'monte_carlo_ok': mc_ok, 'normalization_error': norm_err,
              'sup_norm_vs_laplace': sup}
    return report, {'chopping': mc, 'kernel_curves': curves}


def _random_tree_move(state, rng):
    t = int(rng.integers(state.m))
    tree = state.forest[t]
    move = rng.integers(3)
    singly = tree.singly_internal()
    if move == 1 and singly:
        node = singly[rng.integers(len(singly))]
        return t, tree.prune(node.path)
    if move == 2 and tree.decisions:
        node = tree.decisions[rng.integers(len(tree.decisions))]
        new = tree.change(node.path, sample_rule(node.box, rng))
        if new.is_valid():
            return t, new
    leaf = tree.leaves[rng.integers(tree.n_leaves)]
    return t, tree.grow(leaf.path, sample_rule(leaf.box, rng))


def verify_lowrank(seed=0, N=200, n_proposals=500, m=50, D=3, tol=1e-8):
    """
    Low-rank marginal-likelihood changes against dense recomputation.

    Random grow, prune and change proposals are scored both ways; half of
    them are accepted so the state drifts. The low-rank path must agree
    within `tol` on every proposal and take less total time.
    """
    rng = np.random.default_rng(seed)
    space = FeatureSpace([Continuous(0., 1.) for _ in range(D)])
    forest = sample_forest_prior(space, m, 0.95, 2., rng)
    X = sample_uniform(space, N, rng)
    y = rng.normal(size=N)
    state = GpState(forest, 0.5, X, y)

    errors = np.empty(n_proposals)
    fast = slow = 0.
    for i in range(n_proposals):
        t, tree = _random_tree_move(state, rng)

        start = time.perf_counter()
        candidate = state.propose_tree(t, tree)
        fast += time.perf_counter() - start

        start = time.perf_counter()
        K = gram(state.forest.replace(t, tree), state.sigma0_sq, X)
        K_inv, logdet, _ = factorize(K + state.noise_var * np.eye(N))
        dense = (-0.5 * y.dot(K_inv.dot(y)) - 0.5 * logdet -
                 0.5 * N * LOG_2PI)
        slow += time.perf_counter() - start

        errors[i] = abs(candidate.delta - (dense - state.mll))
        if rng.random() < 0.5:
            state.accept(candidate)

    drift = state.check()
    report = {'check': 'lowrank',
              'passed': bool(errors.max() <= tol and fast < slow),
              'N': N, 'proposals': n_proposals,
              'max_error': float(errors.max()),
              'update_seconds': fast, 'dense_seconds': slow,
              'cache_drift': dict((k, float(v)) for k, v in drift.items())}
    frame = pd.DataFrame({'proposal': np.arange(n_proposals),
                          'abs_error': errors})
    return report, {'lowrank': frame}


ORACLE_SPACE = FeatureSpace([Continuous(0., 1.), Integer(0, 4),
                             Categorical(3)])


def _small_ensemble(rng, S=2, m=3, n=8, max_splits=12):
    X = sample_uniform(ORACLE_SPACE, n, rng)
    data = standardize(ORACLE_SPACE, X, rng.normal(size=n))
    while True:
        forests = [sample_forest_prior(ORACLE_SPACE, m, 0.95, 2., rng)
                   for _ in range(S)]
        if sum(f.total_leaves() - f.m for f in forests) <= max_splits:
            break
    states = [GpState(f, 0.1, data.X, data.y) for f in forests]
    return PosteriorEnsemble(states, data)


def verify_oracle(seed=0, n_instances=20, rel_gap=0.1, tol=1e-9):
    """
    Branch-and-bound against exhaustive cell enumeration.

    With a zero gap the optimum must match the oracle within `tol`; with
    `rel_gap` the returned value must lie within that relative gap.
    """
    rng = np.random.default_rng(seed)
    exact = AcqConfig(rel_gap=0., probes=0, time_limit=60.)
    loose = exact.replace(rel_gap=rel_gap)
    rows = []
    for i in range(n_instances):
        ensemble = _small_ensemble(rng)
        oracle = exhaustive_oracle(ensemble, ORACLE_SPACE)
        best = branch_and_bound(ensemble, ORACLE_SPACE, exact, rng)
        near = branch_and_bound(ensemble, ORACLE_SPACE, loose, rng)
        slack = rel_gap * max(abs(oracle.value), 1e-6)
        rows.append({'instance': i, 'oracle': oracle.value,
                     'cells': oracle.nodes_explored,
                     'exact': best.value, 'exact_nodes': best.nodes_explored,
                     'within_gap': near.value,
                     'exact_ok': abs(best.value - oracle.value) <= tol,
                     'gap_ok': oracle.value - near.value <= slack + tol})
    frame = pd.DataFrame(rows, columns=['instance', 'oracle', 'cells',
                                        'exact', 'exact_nodes',
                                        'within_gap', 'exact_ok', 'gap_ok'])
    passed = bool(frame['exact_ok'].all() and frame['gap_ok'].all())
    return {'check': 'oracle', 'passed': passed, 'instances': n_instances,
            'max_abs_error': float(np.max(np.abs(frame['exact'] -
                                                 frame['oracle'])))}, \
        {'oracle': frame}


CHECKS = {'kernel-limit': verify_kernel_limit,
          'chopping': verify_chopping,
          'lowrank': verify_lowrank,
          'oracle': verify_oracle}


def run_checks(which, seed=0):
    """
    Run one named check, or every check for 'all'.

    Returns
    -------
    reports : list of dict
    frames : dict of pandas.DataFrame
    """
    if which == 'all':
        names = sorted(CHECKS)
    elif which in CHECKS:
        names = [which]
    else:
        raise ValueError("Unknown check '{0}'; choose from {1} or "
                         "'all'.".format(which, sorted(CHECKS)))
    reports, frames = [], {}
    for name in names:
        report, curves = CHECKS[name](seed=seed)
        level = logging.INFO if report['passed'] else logging.WARNING
        logger.log(level, "Check %s %s.", name,
                   'passed' if report['passed'] else 'FAILED')
        reports.append(report)
        frames.update(curves)
    return reports, frames
