"""
session.py : Persistent ask/tell Bayesian-optimization session.
"""
import json
import logging
import time
from collections import namedtuple

import numpy as np
import pandas as pd

from ..acquisition import maximize_acquisition
from ..domain import FeatureSpace, sample_uniform, standardize
from ..forest import Forest
from ..mcmc import run_chains
from .config import BoConfig


logger = logging.getLogger(__name__)

TRACE_COLUMNS = ['iteration', 'best_so_far', 'y', 'acq_value', 'gap',
                 'fit_seconds', 'opt_seconds']

WarmStart = namedtuple('WarmStart', ['forest', 'noise_var'])


class BoSession(object):
    """
    Observations, warm-start chains and trace of one optimization run.

    Parameters
    ----------
    space : FeatureSpace
    config : BoConfig, optional
    path : str, optional
        JSON file the session is written to after every `tell`.
    optimum : float, optional
        Known optimal value; adds a simple-regret column to the trace.

    Attributes
    ----------
    X : 2d array, (N, D)
        Observed points, encoded.
    y_raw : 1d array, length N
        Observed outputs on the objective's own scale.
    pending : list of 1d array
        Initial-design points not yet told.
    warm : list of WarmStart or None
        Final chain states of the last fit.
    trace : list of dict
        One row per told observation.
    rng : numpy.random.Generator
        Session stream. An ask works on a copy; the stream only advances
        when the asked point is told.
    """

    def __init__(self, space, config=None, path=None, optimum=None):
        self.space = space
        self.config = config or BoConfig()
        self.path = path
        self.optimum = optimum
        self.rng = np.random.default_rng(self.config.seed)
        self.X = np.zeros((0, space.D))
        self.y_raw = np.zeros(0)
        self.pending = []
        self.warm = None
        self.trace = []
        self.proposal = None
        self.last_ensemble = None

    def __repr__(self):
        return "BoSession(D={0}, N={1}, best={2!r}, pending={3})".format(
            self.space.D, self.N, self.best_so_far, len(self.pending))

    @property
    def N(self):
        return self.y_raw.size

    @property
    def best_so_far(self):
        """Best observed output, direction-aware; None before any tell."""
        if self.N == 0:
            return None
        if self.config.direction == 'minimize':
            return float(self.y_raw.min())
        return float(self.y_raw.max())

    @property
    def best_x(self):
        if self.N == 0:
            return None
        y = self.config.sign * self.y_raw
        return self.X[int(np.argmax(y))].copy()

    def _improves(self, y, best):
        if best is None:
            return True
        return y < best if self.config.direction == 'minimize' else y > best

    def design(self):
        """Draw the uniform initial design into `pending`."""
        n = self.config.init_points(self.space.D)
        self.pending = list(sample_uniform(self.space, n, self.rng))
        return self.pending

    def ask(self):
        """
        Next point to evaluate.

        Pending initial-design points come first. Otherwise the outputs are
        standardized (negated when minimizing), the chains are run from the
        last fit's final states and the integrated UCB is maximized. The
        dataset is not modified; repeated asks without a tell return the
        same point.

        Returns
        -------
        x : 1d array
            Encoded point in the domain.
        """
        if self.pending:
            return self.pending[0].copy()
        if self.N == 0:
            raise ValueError("The session needs at least one observation "
                             "before it can propose a point.")

        rng = np.random.default_rng()
        rng.bit_generator.state = self.rng.bit_generator.state
        data = standardize(self.space, self.X, self.config.sign * self.y_raw)

        start = time.perf_counter()
        ensemble = run_chains(data, self.config.sampler, init=self.warm,
                              seed=rng)
        fit_seconds = time.perf_counter() - start

        start = time.perf_counter()
        result = maximize_acquisition(ensemble, self.space, self.config.acq,
                                      rng)
        opt_seconds = time.perf_counter() - start

        warm = None
        if ensemble.final_states is not None:
            warm = [WarmStart(s.forest, s.noise_var)
                    for s in ensemble.final_states]
        self.last_ensemble = ensemble
        self.proposal = {'x': result.x_best, 'acq_value': result.value,
                         'gap': result.proven_gap,
                         'fit_seconds': fit_seconds,
                         'opt_seconds': opt_seconds,
                         'rng_state': rng.bit_generator.state,
                         'warm': warm}
        logger.info("Proposed %s (acquisition %.4g, gap %.3g, fit %.2fs, "
                    "optimize %.2fs).", self.space.to_values(result.x_best),
                    result.value, result.proven_gap, fit_seconds, opt_seconds)
        return result.x_best.copy()

    def tell(self, x, y_raw):
        """
        Record an observation.

        Parameters
        ----------
        x : 1d array
            Encoded point in the domain.
        y_raw : float
            Objective value, finite.

        Returns
        -------
        session : BoSession
            This session, saved to `path` when one is set.
        """
        x = self.space.check_points(x)[0]
        y_raw = float(y_raw)
        if not np.isfinite(y_raw):
            raise ValueError("Observed value must be finite, got "
                             "{0}.".format(y_raw))
        best = self.best_so_far
        self.X = np.vstack([self.X, x])
        self.y_raw = np.append(self.y_raw, y_raw)

        for k, p in enumerate(self.pending):
            if np.array_equal(p, x):
                del self.pending[k]
                break

        row = {'iteration': len(self.trace) + 1, 'y': y_raw,
               'acq_value': np.nan, 'gap': np.nan, 'fit_seconds': np.nan,
               'opt_seconds': np.nan}
        if self.proposal is not None:
            p = self.proposal
            for k in ('acq_value', 'gap', 'fit_seconds', 'opt_seconds'):
                row[k] = p[k]
            self.rng.bit_generator.state = p['rng_state']
            self.warm = p['warm']
            self.proposal = None
        row['best_so_far'] = self.best_so_far
        row['x'] = self.space.to_values(x)
        self.trace.append(row)
        if self._improves(y_raw, best):
            logger.info("Iteration %d: new best %.6g.", row['iteration'],
                        y_raw)

        if self.path:
            self.save(self.path)
        return self

    def trace_frame(self):
        """
        The trace as a DataFrame.

        Columns are `TRACE_COLUMNS`, plus ``regret`` (distance of
        ``best_so_far`` to the known optimum) when `optimum` is set.
        """
        frame = pd.DataFrame(self.trace, columns=TRACE_COLUMNS)
        if self.optimum is not None:
            frame['regret'] = self.config.sign * (self.optimum -
                                                  frame['best_so_far'])
        return frame

    def to_csv(self, path):
        """Write `trace_frame` to `path`."""
        self.trace_frame().to_csv(path, index=False)

    def to_dict(self):
        def warm_dict(warm):
            if warm is None:
                return None
            return [{'forest': w.forest.to_dict(), 'noise_var': w.noise_var}
                    for w in warm]

        proposal = None
        if self.proposal is not None:
            proposal = dict(self.proposal)
            proposal['x'] = self.space.to_values(proposal['x'])
            proposal['warm'] = warm_dict(proposal['warm'])
        return {'space': self.space.to_dict(),
                'config': self.config.to_dict(),
                'X': [self.space.to_values(x) for x in self.X],
                'y': self.y_raw.tolist(),
                'pending': [self.space.to_values(x) for x in self.pending],
                'rng_state': self.rng.bit_generator.state,
                'warm': warm_dict(self.warm),
                'proposal': proposal,
                'trace': self.trace,
                'optimum': self.optimum}

    @classmethod
    def from_dict(cls, spec, path=None):
        space = FeatureSpace.from_dict(spec['space'])
        session = cls(space, BoConfig.from_dict(spec['config']), path,
                      spec.get('optimum'))

        def read_warm(warm):
            if warm is None:
                return None
            return [WarmStart(Forest.from_dict(w['forest'], space),
                              float(w['noise_var'])) for w in warm]

        if spec['X']:
            session.X = np.array([space.from_values(v) for v in spec['X']])
        session.y_raw = np.asarray(spec['y'], dtype=float)
        session.pending = [space.from_values(v) for v in spec['pending']]
        session.rng.bit_generator.state = spec['rng_state']
        session.warm = read_warm(spec['warm'])
        session.trace = list(spec['trace'])
        proposal = spec.get('proposal')
        if proposal is not None:
            proposal = dict(proposal)
            proposal['x'] = space.from_values(proposal['x'])
            proposal['warm'] = read_warm(proposal['warm'])
            session.proposal = proposal
        return session

    def save(self, path=None):
        path = path or self.path
        with open(path, 'w') as f:
            json.dump(self.to_dict(), f, indent=1)
        return path

    @classmethod
    def load(cls, path):
        with open(path) as f:
            spec = json.load(f)
        return cls.from_dict(spec, path)


def initialize(space, objective=None, config=None, rng=None, path=None,
               optimum=None):
    """
    Start a session with a uniform initial design.

    Parameters
    ----------
    space : FeatureSpace
    objective : callable, optional
        Maps an encoded point to a float. When given, the initial points
        are evaluated and told; otherwise they wait in ``session.pending``.
    config : BoConfig, optional
    rng : numpy.random.Generator, optional
        Replaces the stream seeded from ``config.seed``.
    path : str, optional
        Session file.
    optimum : float, optional

    Returns
    -------
    session : BoSession
    """
    session = BoSession(space, config, path, optimum)
    if rng is not None:
        session.rng = rng
    session.design()
    if objective is not None:
        _evaluate_pending(session, objective)
    elif path:
        session.save()
    return session


def ask(session):
    """Next point to evaluate; see `BoSession.ask`."""
    return session.ask()


def tell(session, x, y_raw):
    """Record an observation; see `BoSession.tell`."""
    return session.tell(x, y_raw)


def _evaluate(session, objective):
    x = session.ask()
    session.tell(x, objective(x))


def _evaluate_pending(session, objective):
    while session.pending:
        _evaluate(session, objective)


def run_loop(space, objective, config=None, n_iterations=None, path=None,
             optimum=None, return_session=False):
    """
    Full optimization run: initial design, then ask/evaluate/tell.

    Parameters
    ----------
    space : FeatureSpace
    objective : callable
        Maps an encoded point to a float.
    config : BoConfig, optional
    n_iterations : int, optional
        Overrides ``config.n_iterations``; 0 evaluates the initial design
        only.
    path : str, optional
        Session file, written after every evaluation and when the
        objective raises.
    optimum : float, optional
        Known optimal value, for the regret column.
    return_session : bool, optional
        Also return the finished session.

    Returns
    -------
    trace : pandas.DataFrame
        See `BoSession.trace_frame`.
    session : BoSession
        Only when `return_session` is True.
    """
    config = config or BoConfig()
    if n_iterations is None:
        n_iterations = config.n_iterations
    if int(n_iterations) != n_iterations or n_iterations < 0:
        raise ValueError("n_iterations must be a non-negative integer, got "
                         "{0}.".format(n_iterations))

    session = BoSession(space, config, path, optimum)
    session.design()
    try:
        _evaluate_pending(session, objective)
        for i in range(int(n_iterations)):
            _evaluate(session, objective)
            logger.info("Iteration %d/%d: best so far %.6g.", i + 1,
                        n_iterations, session.best_so_far)
    except Exception:
        logger.error("Objective failed after %d evaluations; partial trace "
                     "kept.", session.N)
        if path:
            session.save()
        raise
    trace = session.trace_frame()
    if return_session:
        return trace, session
    return trace
