"""
evaluate.py : Regression scoring, regret reporting and benchmark runs.
"""
import logging
from collections import namedtuple

import numpy as np
import pandas as pd

from ..bo import BoConfig, run_loop
from ..domain import sample_uniform, standardize
from ..gp import mixture_mse, mixture_nlpd
from ..mcmc import SamplerConfig, run_chains


logger = logging.getLogger(__name__)

RegressionScore = namedtuple('RegressionScore', ['nlpd', 'mse'])

METHODS = ('bark', 'bark-prior', 'random')
RESULT_COLUMNS = ['benchmark', 'method', 'seed', 'iteration', 'regret',
                  'best_so_far']


def train_test_split(N, test_fraction=0.2, seed=None):
    """
    Random split of ``range(N)``.

    Returns
    -------
    train, test : 1d int arrays
        Both nonempty.
    """
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must lie in (0, 1), got {0}.".format(
            test_fraction))
    n_test = int(round(test_fraction * N))
    if n_test < 1 or n_test >= N:
        raise ValueError("Cannot split {0} rows with test fraction "
                         "{1}.".format(N, test_fraction))
    perm = np.random.default_rng(seed).permutation(N)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def _score(ensemble, X_test, y_test_raw):
    nlpd = float(np.mean(mixture_nlpd(ensemble, X_test, y_test_raw)))
    return RegressionScore(nlpd, mixture_mse(ensemble, X_test, y_test_raw))


def regression_fit(dataset, split_seed=0, config=None, test_fraction=0.2):
    """
    Like `regression_eval`, also returning the fitted ensemble.

    Returns
    -------
    score : RegressionScore
    ensemble : PosteriorEnsemble
        Fitted on the training rows, with the chain diagnostics attached.
    """
    if dataset.N < 10:
        raise ValueError("regression_eval needs at least 10 rows, got "
                         "{0}.".format(dataset.N))
    train, test = train_test_split(dataset.N, test_fraction, split_seed)
    part = dataset.subset(train)
    data = standardize(part.space, part.X, part.y_raw)
    ensemble = run_chains(data, config or SamplerConfig(), seed=split_seed)
    score = _score(ensemble, dataset.X[test], dataset.y_raw[test])
    logger.info("Split %d: NLPD %.4f, MSE %.4g.", split_seed, score.nlpd,
                score.mse)
    return score, ensemble


def regression_eval(dataset, split_seed=0, config=None, test_fraction=0.2):
    """
    Held-out NLPD and MSE of a posterior fit.

    Parameters
    ----------
    dataset : Dataset
        At least 10 rows, raw outputs in ``dataset.y_raw``.
    split_seed : int
        Seeds the split and the chains.
    config : SamplerConfig, optional
    test_fraction : float
        Share of rows held out.

    Returns
    -------
    score : RegressionScore
        Raw-scale mean NLPD and MSE on the test rows.
    """
    return regression_fit(dataset, split_seed, config, test_fraction)[0]


def depth_prior_sensitivity(dataset, alphas=(0.5, 0.95), betas=(1., 2.),
                            config=None, split_seed=0, test_fraction=0.2):
    """
    Held-out scores over a grid of node-depth prior parameters.

    Returns
    -------
    scores : pandas.DataFrame
        Columns alpha, beta, nlpd, mse.
    """
    config = config or SamplerConfig()
    rows = []
    for alpha in alphas:
        for beta in betas:
            score = regression_eval(dataset, split_seed,
                                    config.replace(alpha=alpha, beta=beta),
                                    test_fraction)
            rows.append({'alpha': alpha, 'beta': beta, 'nlpd': score.nlpd,
                         'mse': score.mse})
    return pd.DataFrame(rows, columns=['alpha', 'beta', 'nlpd', 'mse'])


def sample_count_sensitivity(dataset, chains=(1, 2, 4, 8),
                             samples=(1, 2, 4, 8), config=None,
                             split_seeds=(0,), test_fraction=0.2):
    """
    Held-out scores over a grid of chain counts and samples per chain.

    Parameters
    ----------
    dataset : Dataset
    chains : sequence of int
        Numbers of parallel chains.
    samples : sequence of int
        States kept per chain. The thinning interval of `config` is held
        fixed, so each chain runs ``samples * config.thin`` sweeps after
        burn-in.
    config : SamplerConfig, optional
    split_seeds : sequence of int
        Scores are averaged over one split per seed.
    test_fraction : float

    Returns
    -------
    scores : pandas.DataFrame
        Columns chains, samples, nlpd, mse.
    """
    config = config or SamplerConfig()
    if len(split_seeds) == 0:
        raise ValueError("sample_count_sensitivity needs at least one "
                         "split seed.")
    rows = []
    for n_chains in chains:
        for kept in samples:
            cfg = config.replace(chains=n_chains,
                                 samples_per_chain=kept * config.thin)
            scores = [regression_eval(dataset, seed, cfg, test_fraction)
                      for seed in split_seeds]
            rows.append({'chains': n_chains, 'samples': kept,
                         'nlpd': float(np.mean([s.nlpd for s in scores])),
                         'mse': float(np.mean([s.mse for s in scores]))})
    return pd.DataFrame(rows, columns=['chains', 'samples', 'nlpd', 'mse'])


def regret_report(trace, optimum, direction='minimize'):
    """
    Simple regret per iteration.

    Parameters
    ----------
    trace : pandas.DataFrame or 1d array
        A trace with a ``best_so_far`` column, or the column itself.
    optimum : float
    direction : {'minimize', 'maximize'}

    Returns
    -------
    regret : 1d array
        ``best_so_far - optimum`` when minimizing, ``optimum -
        best_so_far`` when maximizing.
    """
    if isinstance(trace, pd.DataFrame):
        trace = trace['best_so_far'].values
    best = np.asarray(trace, dtype=float)
    if direction == 'minimize':
        return best - optimum
    return optimum - best


def aggregate_regret(regrets):
    """
    Median and interquartile range of regret across runs.

    Parameters
    ----------
    regrets : 2d array or list of 1d arrays
        One row per run, equal lengths.

    Returns
    -------
    summary : pandas.DataFrame
        Columns iteration, median, q25, q75.
    """
    regrets = np.atleast_2d(np.asarray(regrets, dtype=float))
    q25, median, q75 = np.percentile(regrets, [25, 50, 75], axis=0)
    return pd.DataFrame({'iteration': np.arange(1, regrets.shape[1] + 1),
                         'median': median, 'q25': q25, 'q75': q75},
                        columns=['iteration', 'median', 'q25', 'q75'])


def random_search_trace(benchmark, n_evaluations, seed=None):
    """Best-so-far of uniform sampling, for comparison with BO traces."""
    rng = np.random.default_rng(seed)
    X = sample_uniform(benchmark.space, n_evaluations, rng)
    return np.minimum.accumulate(benchmark.evaluate(X))


def run_benchmark(benchmark, seeds, config=None, n_iterations=None,
                  method='bark', path=None):
    """
    Optimize `benchmark` once per seed.

    Parameters
    ----------
    benchmark : Benchmark
    seeds : sequence of int
    config : BoConfig, optional
    n_iterations : int, optional
        Overrides ``config.n_iterations``.
    method : {'bark', 'bark-prior', 'random'}
        'bark-prior' samples forests from the prior without MCMC; 'random'
        draws the same number of uniform points.
    path : str, optional
        Session file pattern with a ``{seed}`` field.

    Returns
    -------
    results : pandas.DataFrame
        Columns benchmark, method, seed, iteration, regret, best_so_far;
        regret is NaN when the optimum is unknown.
    """
    if method not in METHODS:
        raise ValueError("method must be one of {0}, got '{1}'.".format(
            METHODS, method))
    config = config or BoConfig()
    if n_iterations is None:
        n_iterations = config.n_iterations
    if method == 'bark-prior':
        config = config.replace(
            sampler=config.sampler.replace(prior_only=True))

    frames = []
    for seed in seeds:
        cfg = config.replace(seed=seed)
        if method == 'random':
            n = cfg.init_points(benchmark.space.D) + n_iterations
            best = random_search_trace(benchmark, n, seed)
        else:
            trace = run_loop(benchmark.space, benchmark, cfg, n_iterations,
                             path.format(seed=seed) if path else None,
                             benchmark.optimum)
            best = trace['best_so_far'].values
        regret = (regret_report(best, benchmark.optimum)
                  if benchmark.optimum is not None
                  else np.full(best.size, np.nan))
        frames.append(pd.DataFrame({
            'benchmark': benchmark.name, 'method': method, 'seed': seed,
            'iteration': np.arange(1, best.size + 1), 'regret': regret,
            'best_so_far': best}, columns=RESULT_COLUMNS))
        logger.info("%s/%s seed %d: final best %.6g.", benchmark.name,
                    method, seed, best[-1])
    return pd.concat(frames, ignore_index=True)


def summarize_results(results):
    """
    Per-iteration regret median and quartiles of each benchmark and method.

    Returns
    -------
    summary : dict
        ``{benchmark: {method: {'median': [...], 'q25': [...],
        'q75': [...]}}}``.
    """
    summary = {}
    for (name, method), group in results.groupby(['benchmark', 'method']):
        runs = [g['regret'].values for _, g in group.groupby('seed')]
        agg = aggregate_regret(runs)
        summary.setdefault(name, {})[method] = dict(
            (k, agg[k].tolist()) for k in ('median', 'q25', 'q75'))
    return summary
