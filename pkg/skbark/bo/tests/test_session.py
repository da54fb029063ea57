import os

import numpy as np
from numpy.testing import (assert_allclose, assert_array_equal, assert_equal,
                           assert_raises)
from scipy.stats import binomtest

import skbark as bark


def setup_module():
    global line, mixed, sampler, acq, config

    line = bark.FeatureSpace([bark.Continuous(0, 1)])
    mixed = bark.FeatureSpace([bark.Continuous(0, 1), bark.Integer(0, 3),
                               bark.Categorical(3, ['a', 'b', 'c'])])
    sampler = bark.SamplerConfig(m=5, chains=2, burn_in=20,
                                 samples_per_chain=20, thin=10, threads=1)
    # Node limit rather than time limit keeps proposals reproducible
    acq = bark.AcqConfig(time_limit=60., node_limit=500, probes=20)
    config = bark.BoConfig(n_iterations=3, sampler=sampler, acq=acq, seed=7)


def _objective(x):
    return (x[0] - 0.3) ** 2 + 0.1 * x[1] + (0.5 if x[2] == 1 else 0.)


def test_initial_design_size():
    assert bark.initial_design_size(3) == 6
    assert bark.initial_design_size(20) == 30
    assert bark.initial_design_size(1) == 2
    assert bark.BoConfig(n_init=4).init_points(10) == 4

    session = bark.initialize(mixed, config=config)
    assert len(session.pending) == 6
    assert session.N == 0


def test_config_validation():
    assert_raises(ValueError, bark.BoConfig, direction='up')
    assert_raises(ValueError, bark.BoConfig, n_iterations=0)
    assert_raises(ValueError, bark.BoConfig.from_dict, {'budget': 3})
    assert bark.BoConfig().sign == -1
    assert bark.BoConfig(direction='maximize').sign == 1
    spec = config.to_dict()
    assert bark.BoConfig.from_dict(spec) == config
    assert bark.BoConfig(sampler=sampler.to_dict()).sampler == sampler


def test_initialize_with_objective():
    session = bark.initialize(mixed, _objective, config)
    assert session.N == 6
    assert session.pending == []
    trace = session.trace_frame()
    assert_equal(list(trace.columns), bark.TRACE_COLUMNS)
    assert np.isnan(trace['acq_value']).all()


def test_ask_needs_data():
    session = bark.BoSession(line, config)
    assert_raises(ValueError, session.ask)


def test_ask_returns_pending_first():
    session = bark.initialize(line, config=config)
    first = session.pending[0]
    assert_array_equal(bark.ask(session), first)
    bark.tell(session, first, 1.)
    assert len(session.pending) == 1


def test_repeated_ask_is_identical():
    session = bark.initialize(mixed, _objective, config)
    state = session.rng.bit_generator.state
    x1 = bark.ask(session)
    x2 = bark.ask(session)
    assert_array_equal(x1, x2)
    assert session.rng.bit_generator.state == state
    assert session.N == 6
    assert mixed.full_box().contains(x1[np.newaxis, :]).all()


def test_best_so_far_updates():
    session = bark.BoSession(line, config)
    assert session.best_so_far is None
    bark.tell(session, [0.2], 3.)
    bark.tell(session, [0.4], 1.)
    assert session.best_so_far == 1.
    bark.tell(session, [0.6], 2.)
    assert session.best_so_far == 1.
    assert_allclose(session.best_x, [0.4])

    up = bark.BoSession(line, config.replace(direction='maximize'))
    for x, y in ((0.2, 3.), (0.4, 1.), (0.6, 5.)):
        bark.tell(up, [x], y)
    assert_allclose(up.trace_frame()['best_so_far'], [3., 3., 5.])


def test_tell_rejects_bad_input():
    session = bark.BoSession(line, config)
    assert_raises(ValueError, bark.tell, session, [0.5], np.nan)
    assert_raises(ValueError, bark.tell, session, [0.5], np.inf)
    assert_raises(ValueError, bark.tell, session, [1.5], 0.)
    assert session.N == 0


def test_run_loop_trace():
    trace = bark.run_loop(mixed, _objective, config, optimum=0.)
    assert len(trace) == 6 + 3
    best = trace['best_so_far'].values
    assert (np.diff(best) <= 0).all()
    assert_allclose(best, np.minimum.accumulate(trace['y'].values))
    assert (trace['regret'] >= 0).all()
    assert np.isfinite(trace['acq_value'].values[6:]).all()
    assert np.isfinite(trace['gap'].values[6:]).all()


def test_run_loop_without_iterations():
    trace = bark.run_loop(mixed, _objective, config, n_iterations=0)
    assert len(trace) == 6
    assert np.isnan(trace['acq_value']).all()


def test_run_loop_is_deterministic():
    one = bark.run_loop(mixed, _objective, config, n_iterations=2)
    two = bark.run_loop(mixed, _objective, config, n_iterations=2)
    assert_array_equal(one['y'].values, two['y'].values)


def test_warm_start_skips_burn_in():
    session = bark.initialize(mixed, _objective, config)
    x = bark.ask(session)
    assert session.last_ensemble.burn_in_sweeps == sampler.burn_in
    bark.tell(session, x, _objective(x))
    assert len(session.warm) == sampler.chains

    bark.ask(session)
    assert session.last_ensemble.burn_in_sweeps == 0
    assert session.last_ensemble.S == sampler.n_samples


def test_prior_only_mode():
    cfg = config.replace(sampler=sampler.replace(prior_only=True))
    trace, session = bark.run_loop(mixed, _objective, cfg, n_iterations=2,
                                   return_session=True)
    assert len(trace) == 8
    assert session.warm is None
    assert session.last_ensemble.final_states is None
    assert (np.diff(trace['best_so_far'].values) <= 0).all()


def test_reload_reproduces_ask(tmp_path):
    path = str(tmp_path / 'session.json')
    session = bark.initialize(mixed, _objective, config, path=path)
    x = bark.ask(session)
    session.save()

    loaded = bark.BoSession.load(path)
    assert_array_equal(loaded.X, session.X)
    assert_array_equal(bark.ask(loaded), x)

    bark.tell(session, x, _objective(x))
    loaded = bark.BoSession.load(path)
    assert loaded.N == session.N
    assert_array_equal(bark.ask(loaded), bark.ask(session))


def test_failing_objective_keeps_partial_session(tmp_path):
    path = str(tmp_path / 'partial.json')
    calls = []

    def flaky(x):
        calls.append(x)
        if len(calls) > 3:
            raise RuntimeError("simulator crashed")
        return float(x[0])

    assert_raises(RuntimeError, bark.run_loop, mixed, flaky, config,
                  None, path)
    assert os.path.exists(path)
    session = bark.BoSession.load(path)
    assert session.N == 3
    assert len(session.trace) == 3


def test_proposals_exploit_step():
    cfg = bark.BoConfig(
        sampler=bark.SamplerConfig(m=10, chains=2, burn_in=100,
                                   samples_per_chain=100, thin=50,
                                   threads=1),
        acq=bark.AcqConfig(time_limit=60., node_limit=2000),
        direction='maximize')
    high = 0
    for seed in range(10):
        rng = np.random.default_rng(seed)
        session = bark.BoSession(line, cfg.replace(seed=seed))
        for x in rng.uniform(size=20):
            bark.tell(session, [x], float(x > 0.5))
        high += bark.ask(session)[0] > 0.5
    assert binomtest(high, 10, 0.5, alternative='greater').pvalue < 0.01
