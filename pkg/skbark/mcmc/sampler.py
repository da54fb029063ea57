"""
sampler.py : Metropolis-Hastings chains over forests and noise variance.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from ..forest import (MAX_DEPTH, Forest, Tree, sample_forest_prior,
                      sample_rule)
from ..gp import GpState, PosteriorEnsemble
from .config import SamplerConfig
from .ratios import (NoisePrior, change_ratios, grow_ratios,
                     noise_log_prior_ratio, noise_log_transition_ratio,
                     prune_ratios, softplus, softplus_inv)


logger = logging.getLogger(__name__)

MOVES = ('grow', 'prune', 'change')
DIAGNOSTIC_COLUMNS = ['chain', 'sweep', 'mll', 'sigma_y_sq', 'total_leaves',
                      'accept_grow', 'accept_prune', 'accept_change',
                      'accept_noise']


class ChainState(object):
    """
    One Markov chain: a GpState, its random stream and its bookkeeping.

    Parameters
    ----------
    state : GpState
        Starting state; updated in place.
    config : SamplerConfig
    rng : numpy.random.Generator
        Stream owned by this chain.
    noise_prior : NoisePrior, optional
        Built from the config when omitted.
    chain : int, optional
        Index reported in diagnostics.

    Attributes
    ----------
    accepted, proposed : dict
        Counters per move type ('grow', 'prune', 'change', 'noise').
    trace : list of dict
        One diagnostics row per sweep.
    """

    def __init__(self, state, config, rng, noise_prior=None, chain=0):
        self.state = state
        self.config = config
        self.rng = rng
        self.noise_prior = noise_prior or NoisePrior(config.nu, config.q)
        self.chain = chain
        self.sweeps = 0
        self.accepted = dict((k, 0) for k in MOVES + ('noise',))
        self.proposed = dict((k, 0) for k in MOVES + ('noise',))
        self.trace = []
        self._data = state.X if config.split_sampling == 'data' else None

    def _select_move(self, tree):
        w = self.config.move_weights
        if tree.n_leaves == 1:
            # Only grow is feasible; the reverse prune is chosen with w[1]
            return 'grow', np.log(w[1])
        move = MOVES[self.rng.choice(3, p=w)]
        if move == 'prune' and tree.n_leaves == 2:
            return move, -np.log(w[1])
        return move, 0.

    def _metropolis(self, move, log_ratio, candidate):
        self.proposed[move] += 1
        log_accept = log_ratio + candidate.delta
        if log_accept >= 0 or np.log(self.rng.random()) < log_accept:
            self.state.accept(candidate)
            self.accepted[move] += 1
            return True
        return False

    def tree_step(self, t):
        """One grow, prune or change proposal on tree `t`."""
        cfg = self.config
        tree = self.state.forest[t]
        move, correction = self._select_move(tree)

        if move == 'grow':
            leaf = tree.leaves[self.rng.integers(tree.n_leaves)]
            if leaf.depth >= MAX_DEPTH or not leaf.box.splittable_features():
                self.proposed[move] += 1
                return False
            rule = sample_rule(leaf.box, self.rng, self._data)
            new = tree.grow(leaf.path, rule)
            ratios = grow_ratios(tree, leaf, rule, cfg.alpha, cfg.beta)
        else:
            singly = tree.singly_internal()
            node = singly[self.rng.integers(len(singly))]
            if move == 'prune':
                new = tree.prune(node.path)
                ratios = prune_ratios(tree, node, cfg.alpha, cfg.beta)
            else:
                rule = sample_rule(node.box, self.rng, self._data)
                new = tree.change(node.path, rule)
                ratios = change_ratios(tree, node, rule, cfg.alpha,
                                       cfg.beta)

        candidate = self.state.propose_tree(t, new)
        return self._metropolis(move, sum(ratios) + correction, candidate)

    def noise_step(self):
        """One softplus-walk proposal on the noise variance."""
        old = self.state.noise_var
        theta = softplus_inv(old) + self.config.noise_walk_sd * \
            self.rng.standard_normal()
        new = float(softplus(theta))
        if not new > 0:
            self.proposed['noise'] += 1
            return False
        log_ratio = (noise_log_transition_ratio(old, new,
                                                self.config.noise_walk_sd) +
                     noise_log_prior_ratio(old, new, self.noise_prior))
        candidate = self.state.propose_noise(new)
        return self._metropolis('noise', log_ratio, candidate)

    def sweep(self):
        """One proposal per tree, then one noise proposal."""
        before = dict(self.accepted)
        for t in range(self.state.m):
            self.tree_step(t)
        self.noise_step()
        self.sweeps += 1
        row = {'chain': self.chain, 'sweep': self.sweeps,
               'mll': self.state.mll, 'sigma_y_sq': self.state.noise_var,
               'total_leaves': self.state.forest.total_leaves()}
        for k in MOVES + ('noise',):
            row['accept_' + k] = self.accepted[k] - before[k]
        self.trace.append(row)
        logger.debug("chain %d sweep %d: mll %.4f, noise %.4g, leaves %d",
                     self.chain, self.sweeps, row['mll'], row['sigma_y_sq'],
                     row['total_leaves'])
        return self

    def acceptance_rates(self):
        """Fraction of accepted proposals per move type."""
        return dict((k, self.accepted[k] / float(self.proposed[k])
                     if self.proposed[k] else float('nan'))
                    for k in self.accepted)

    def mll_trace(self):
        return np.array([row['mll'] for row in self.trace])

    def diagnostics_frame(self):
        """Per-sweep diagnostics as a DataFrame."""
        return pd.DataFrame(self.trace, columns=DIAGNOSTIC_COLUMNS)


def mh_step(chain):
    """
    Advance a chain by one sweep.

    Parameters
    ----------
    chain : ChainState

    Returns
    -------
    chain : ChainState
        The same chain, advanced.
    """
    return chain.sweep()


def _as_seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        return np.random.SeedSequence(int(seed.integers(2 ** 63)))
    return np.random.SeedSequence(seed)


def _initial_state(dataset, config, rng, prior, warm):
    if warm is not None:
        forest, noise = warm.forest, warm.noise_var
    else:
        if config.init == 'prior':
            forest = sample_forest_prior(dataset.space, config.m,
                                         config.alpha, config.beta, rng)
        else:
            forest = Forest([Tree.stump(dataset.space)] * config.m)
        noise = prior.median()
    return GpState(forest, noise, dataset.X, dataset.y,
                   refresh_every=config.refresh_every)


def _run_chain(dataset, config, seed_seq, chain, warm):
    rng = np.random.default_rng(seed_seq)
    prior = NoisePrior(config.nu, config.q)

    if config.prior_only:
        kept = []
        for _ in range(config.kept_per_chain):
            forest = sample_forest_prior(dataset.space, config.m,
                                         config.alpha, config.beta, rng)
            kept.append(GpState(forest, float(prior.sample(rng)), dataset.X,
                                dataset.y))
        return kept, None

    state = _initial_state(dataset, config, rng, prior, warm)
    runner = ChainState(state, config, rng, prior, chain)
    n_burn = 0 if warm is not None else config.burn_in
    for _ in range(n_burn):
        runner.sweep()
    kept = []
    for i in range(config.samples_per_chain):
        runner.sweep()
        if (i + 1) % config.thin == 0:
            kept.append(runner.state.copy())
    return kept, runner


def run_chains(dataset, config=None, init=None, seed=None):
    """
    Sample the posterior over forests and noise with parallel chains.

    Parameters
    ----------
    dataset : Dataset
        Standardized training data; may be empty.
    config : SamplerConfig, optional
    init : list of GpState, optional
        Final states of a previous run, one per chain. Chains start from
        their forests and noise variances and skip burn-in.
    seed : int, SeedSequence or Generator, optional
        Chain c draws from the c-th spawned child sequence, so results do
        not depend on thread scheduling.

    Returns
    -------
    ensemble : PosteriorEnsemble
        ``chains * (samples_per_chain // thin)`` states in chain order, with
        extra attributes ``final_states`` (last state of each chain, for
        warm starts), ``diagnostics`` (DataFrame of every sweep),
        ``burn_in_sweeps`` and ``chain_states``.
    """
    config = config or SamplerConfig()
    if init is not None and len(init) != config.chains:
        raise ValueError("Warm start needs {0} states, got {1}.".format(
            config.chains, len(init)))
    children = _as_seed_sequence(seed).spawn(config.chains)
    warm = list(init) if init is not None else [None] * config.chains

    start = time.time()
    workers = config.threads or config.chains
    if workers == 1:
        results = [_run_chain(dataset, config, children[c], c, warm[c])
                   for c in range(config.chains)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_chain, dataset, config, children[c],
                                   c, warm[c])
                       for c in range(config.chains)]
            results = [f.result() for f in futures]

    states = [s for kept, _ in results for s in kept]
    runners = [runner for _, runner in results]
    ensemble = PosteriorEnsemble(states, dataset)
    if config.prior_only:
        ensemble.chain_states = []
        ensemble.final_states = None
        ensemble.diagnostics = pd.DataFrame(columns=DIAGNOSTIC_COLUMNS)
        ensemble.burn_in_sweeps = 0
    else:
        ensemble.chain_states = runners
        ensemble.final_states = [r.state.copy() for r in runners]
        ensemble.diagnostics = pd.concat(
            [r.diagnostics_frame() for r in runners], ignore_index=True)
        ensemble.burn_in_sweeps = 0 if init is not None else config.burn_in
    logger.info("Sampled %d states from %d chains on %d points in %.2fs.",
                len(states), config.chains, dataset.N, time.time() - start)
    return ensemble


def autocorrelation(trace, max_lag):
    """
    Sample autocorrelation of a trace.

    Parameters
    ----------
    trace : 1d array
        Longer than `max_lag`.
    max_lag : int

    Returns
    -------
    rho : 1d array, length max_lag + 1
        ``rho[k] = mean((x[t+k] - mu) (x[t] - mu)) / var(x)``, the mean
        taken over the ``n - k`` available products; ``rho[0] = 1``. A
        constant trace gives all ones.
    """
    x = np.asarray(trace, dtype=float).ravel()
    max_lag = int(max_lag)
    if max_lag < 0 or x.size <= max_lag:
        raise ValueError("Trace of length {0} is too short for max_lag "
                         "{1}.".format(x.size, max_lag))
    dev = x - x.mean()
    var = np.mean(dev ** 2)
    if var == 0:
        return np.ones(max_lag + 1)
    n = x.size
    return np.array([np.mean(dev[k:] * dev[:n - k]) / var
                     for k in range(max_lag + 1)])


def effective_sample_size(trace, max_lag=None):
    """
    Effective sample size from the initial positive sequence of
    autocorrelation pair sums.

    Returns
    -------
    ess : float
        In [1, len(trace)].
    """
    x = np.asarray(trace, dtype=float).ravel()
    n = x.size
    if n < 2:
        return float(n)
    if max_lag is None:
        max_lag = min(n - 1, 1000)
    rho = autocorrelation(x, max_lag)
    tau = -1.
    for k in range(0, max_lag, 2):
        pair = rho[k] + rho[k + 1]
        if pair <= 0:
            break
        tau += 2 * pair
    return float(np.clip(n / tau, 1, n))
