"""
commands.py : The ``skbark`` command.

Exit status is 0 on success, 2 for invalid input or configuration and 1
for runtime failures, including failed ``verify`` checks.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np
import pandas as pd

from ..bench import (make_benchmark, regression_fit, run_benchmark,
                     summarize_results)
from ..bench.evaluate import METHODS
from ..bo import BoSession, initialize
from ..domain import load_csv
from ..forest import sample_forest_prior
from ..mcmc import autocorrelation, effective_sample_size
from .config import ConfigError, RunConfig, configure_logging, load_space
from .verify import CHECKS, run_checks


logger = logging.getLogger(__name__)

ACF_LAG = 50
ACF_LIMIT = 0.2
# Size argument each benchmark factory takes for --dims
DIMENSION_ARGS = {'tree-function': 'D',
                  'tree-function-cat': 'd_cont',
                  'discrete-ackley': 'd_cont',
                  'discrete-rosenbrock': 'd_cont',
                  'styblinski-tang': 'D'}


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError("{0!r} is not JSON serializable.".format(obj))


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable)


def _write_json(obj, path):
    with open(path, 'w') as f:
        f.write(_dumps(obj) + '\n')
    return path


def _output_dir(run):
    out = run.output or '.'
    if not os.path.isdir(out):
        os.makedirs(out)
    return out


def _space(args, run):
    if getattr(args, 'space', None):
        return load_space(args.space)
    if run.space is None:
        raise ConfigError("No feature space: pass --space or a 'space' "
                          "section in --config.")
    return run.space


def _chain_autocorrelation(ensemble):
    # Post-burn-in marginal-likelihood traces of every chain
    rows, lag50 = [], []
    for c, chain in enumerate(ensemble.chain_states):
        trace = chain.mll_trace()[ensemble.burn_in_sweeps:]
        if trace.size < 2:
            lag50.append(None)
            continue
        max_lag = min(2 * ACF_LAG, trace.size - 1)
        rho = autocorrelation(trace, max_lag)
        rows.extend({'chain': c, 'lag': k, 'acf': r}
                    for k, r in enumerate(rho))
        lag50.append(float(rho[ACF_LAG]) if max_lag >= ACF_LAG else None)
    frame = pd.DataFrame(rows, columns=['chain', 'lag', 'acf'])
    return frame, lag50


def cmd_fit(args, run):
    """Held-out regression fit with chain diagnostics."""
    space = _space(args, run)
    dataset = load_csv(args.dataset, space, args.output_column)
    score, ensemble = regression_fit(dataset, run.seed, run.sampler,
                                     args.test_fraction)
    acf, lag50 = _chain_autocorrelation(ensemble)
    checked = [r for r in lag50 if r is not None]
    failing = sum(r >= ACF_LIMIT for r in checked)
    if checked and failing > len(checked) // 4:
        logger.warning("Lag-%d autocorrelation of the likelihood trace is "
                       "at least %.1f on %d of %d chains.", ACF_LAG,
                       ACF_LIMIT, failing, len(checked))

    n_test = int(round(args.test_fraction * dataset.N))
    metrics = {'nlpd': score.nlpd, 'mse': score.mse, 'seed': run.seed,
               'n_train': dataset.N - n_test, 'n_test': n_test,
               'n_samples': ensemble.S, 'chains': run.sampler.chains,
               'acf_lag50': lag50,
               'ess': [effective_sample_size(
                   c.mll_trace()[ensemble.burn_in_sweeps:])
                   for c in ensemble.chain_states],
               'acceptance': [c.acceptance_rates()
                              for c in ensemble.chain_states]}
    out = _output_dir(run)
    _write_json(metrics, os.path.join(out, 'metrics.json'))
    ensemble.diagnostics.to_csv(os.path.join(out, 'diagnostics.csv'),
                                index=False)
    acf.to_csv(os.path.join(out, 'autocorrelation.csv'), index=False)
    print(_dumps({'nlpd': score.nlpd, 'mse': score.mse}))
    return 0


def cmd_optimize(args, run):
    """Benchmark runs over consecutive seeds."""
    bench = run.benchmark
    name = args.benchmark or bench.get('name')
    if not name:
        raise ConfigError("No benchmark: pass a name or a 'benchmark.name' "
                          "in --config.")
    options = dict(bench.get('options', {}))
    if args.dims is not None:
        if name not in DIMENSION_ARGS:
            raise ConfigError("Benchmark '{0}' has a fixed dimension.".format(
                name))
        options[DIMENSION_ARGS[name]] = args.dims
    benchmark = make_benchmark(name, seed=run.seed, **options)

    seeds = args.seeds if args.seeds is not None else bench.get('seeds', 1)
    if isinstance(seeds, list):
        seeds = [int(s) for s in seeds]
    else:
        seeds = list(range(run.seed, run.seed + int(seeds)))
    method = args.method or bench.get('method', 'bark')
    if run.sampler.prior_only:
        method = 'bark-prior'

    results = run_benchmark(benchmark, seeds, run.bo_config(),
                            args.iterations, method)
    out = _output_dir(run)
    results.to_csv(os.path.join(out, 'trace.csv'), index=False)
    final = results.groupby('seed')['best_so_far'].last()
    summary = {'benchmark': name, 'method': method, 'seeds': seeds,
               'optimum': benchmark.optimum,
               'final_best': final.tolist(),
               'regret': summarize_results(results).get(name, {})}
    _write_json(summary, os.path.join(out, 'summary.json'))
    print(_dumps({'benchmark': name, 'method': method,
                  'median_final_best': float(final.median())}))
    return 0


def cmd_init(args, run):
    """New ask/tell session with its initial design pending."""
    space = _space(args, run)
    session = initialize(space, config=run.bo_config(), path=args.session)
    print(_dumps({'session': args.session, 'pending': len(session.pending)}))
    return 0


def _load_session(args):
    session = BoSession.load(args.session)
    if args.threads is not None:
        sampler = session.config.sampler.replace(threads=args.threads)
        session.config = session.config.replace(sampler=sampler)
    return session


def cmd_ask(args, run):
    session = _load_session(args)
    x = session.ask()
    session.save()
    print(json.dumps(session.space.to_values(x)))
    return 0


def cmd_tell(args, run):
    session = _load_session(args)
    try:
        values = json.loads(args.x)
    except ValueError:
        raise ConfigError("--x must be a JSON list, got {0!r}.".format(
            args.x))
    if not isinstance(values, list):
        raise ConfigError("--x must be a JSON list, got {0!r}.".format(
            args.x))
    session.tell(session.space.from_values(values), args.y)
    if run.output:
        session.to_csv(os.path.join(_output_dir(run), 'trace.csv'))
    print(_dumps({'n': session.N, 'best_so_far': session.best_so_far}))
    return 0


def cmd_prior(args, run):
    """Forests drawn from the tree prior, as JSON."""
    space = _space(args, run)
    rng = np.random.default_rng(run.seed)
    s = run.sampler
    forests = [sample_forest_prior(space, s.m, s.alpha, s.beta, rng).to_dict()
               for _ in range(args.count)]
    if run.output:
        _write_json(forests, os.path.join(_output_dir(run), 'prior.json'))
    print(_dumps(forests))
    return 0


def cmd_verify(args, run):
    reports, frames = run_checks(args.check, run.seed)
    passed = all(r['passed'] for r in reports)
    if run.output:
        out = _output_dir(run)
        for name, frame in sorted(frames.items()):
            frame.to_csv(os.path.join(out, 'verify-{0}.csv'.format(name)),
                         index=False)
    print(_dumps({'passed': passed, 'checks': reports}))
    return 0 if passed else 1


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="JSON run configuration.")
    common.add_argument('--seed', type=int, help="Seed of every random "
                        "stream (default 0).")
    common.add_argument('--threads', type=int,
                        help="Worker threads of the chains.")
    common.add_argument('--output', help="Output directory.")
    common.add_argument('--time-limit', type=float,
                        help="Acquisition time limit in seconds.")
    common.add_argument('--rel-gap', type=float,
                        help="Relative optimality gap of the acquisition.")
    common.add_argument('--kappa', type=float,
                        help="Exploration weight of the UCB.")
    common.add_argument('--prior-only', action='store_true',
                        help="Sample forests from the prior, skipping MCMC.")
    common.add_argument('--data-splits', action='store_true',
                        help="Draw split rules from observed values.")
    return common


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog='skbark', description="Bayesian optimization with "
        "posterior-sampled tree kernels.")
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    fit = commands.add_parser('fit', parents=[common],
                              help="Held-out regression fit.")
    fit.add_argument('dataset', help="CSV with a header row.")
    fit.add_argument('--space', help="Feature space JSON.")
    fit.add_argument('--output-column',
                     help="Output column; the last column by default.")
    fit.add_argument('--test-fraction', type=float, default=0.2)
    fit.set_defaults(func=cmd_fit)

    opt = commands.add_parser('optimize', parents=[common],
                              help="Optimize a synthetic benchmark.")
    opt.add_argument('benchmark', nargs='?')
    opt.add_argument('--dims', type=int)
    opt.add_argument('--iterations', type=int)
    opt.add_argument('--seeds', type=int, help="Number of seeds.")
    opt.add_argument('--method', choices=METHODS)
    opt.set_defaults(func=cmd_optimize)

    init = commands.add_parser('init', parents=[common],
                               help="Start an ask/tell session.")
    init.add_argument('session', help="Session JSON to create.")
    init.add_argument('--space', help="Feature space JSON.")
    init.set_defaults(func=cmd_init)

    ask = commands.add_parser('ask', parents=[common],
                              help="Print the next point to evaluate.")
    ask.add_argument('session')
    ask.set_defaults(func=cmd_ask)

    tell = commands.add_parser('tell', parents=[common],
                               help="Record an evaluation.")
    tell.add_argument('session')
    tell.add_argument('--x', required=True, help="Point as a JSON list.")
    tell.add_argument('--y', type=float, required=True)
    tell.set_defaults(func=cmd_tell)

    prior = commands.add_parser('prior', parents=[common],
                                help="Sample forests from the prior.")
    prior.add_argument('--space', help="Feature space JSON.")
    prior.add_argument('--count', type=int, default=1)
    prior.set_defaults(func=cmd_prior)

    verify = commands.add_parser('verify', parents=[common],
                                 help="Run self-checks.")
    verify.add_argument('check', choices=sorted(CHECKS) + ['all'])
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    """
    Run the ``skbark`` command.

    Parameters
    ----------
    argv : list of str, optional
        Arguments after the program name; ``sys.argv[1:]`` by default.

    Returns
    -------
    status : int
    """
    args = build_parser().parse_args(argv)
    try:
        configure_logging()
        run = RunConfig.load(args.config) if args.config else RunConfig()
        run = run.merge_flags(args)
        return args.func(args, run)
    except (ValueError, KeyError, OSError) as e:
        logger.debug("Input error.", exc_info=True)
        print("skbark {0}: error: {1}".format(args.command, e),
              file=sys.stderr)
        return 2
    except Exception as e:
        logger.error("%s failed.", args.command, exc_info=True)
        print("skbark {0}: {1}: {2}".format(args.command, type(e).__name__,
                                             e), file=sys.stderr)
        return 1
