import json

import numpy as np
from numpy.testing import assert_allclose, assert_raises
from scipy.stats import norm

import skbark as bark


def setup_module():
    global square, data, ensemble, rng

    rng = np.random.default_rng(30)
    square = bark.FeatureSpace([bark.Continuous(0, 1), bark.Continuous(0, 1)])
    X = bark.sample_uniform(square, 20, rng)
    y_raw = 3 + 2 * np.sin(5 * X[:, 0]) + X[:, 1]
    data = bark.standardize(square, X, y_raw)
    states = [bark.GpState(bark.sample_forest_prior(square, 8, 0.95, 1., rng),
                           0.1 + 0.2 * s, data.X, data.y)
              for s in range(4)]
    ensemble = bark.PosteriorEnsemble(states, data)


def test_nlpd_standard_normal():
    empty = bark.Dataset(square, np.zeros((0, 2)), [])
    forest = bark.Forest([bark.Tree.stump(square)])
    state = bark.GpState(forest, 0.5, empty.X, empty.y, sigma0_sq=0.5)
    one = bark.PosteriorEnsemble([state], empty)
    assert_allclose(bark.mixture_nlpd(one, [0.2, 0.2], 0.),
                    0.5 * np.log(2 * np.pi))

    two = bark.PosteriorEnsemble([state, state.copy()], empty)
    assert_allclose(bark.mixture_nlpd(two, [0.2, 0.2], 0.7),
                    bark.mixture_nlpd(one, [0.2, 0.2], 0.7))


def test_nlpd_matches_naive_sum():
    Z = bark.sample_uniform(square, 10, rng)
    y_raw = 3 + rng.normal(size=10)
    nlpd = bark.mixture_nlpd(ensemble, Z, y_raw)

    y = (y_raw - data.y_mean) / data.y_std
    dens = np.zeros(10)
    for s in ensemble.states:
        pred = s.predict(Z)
        dens += norm.pdf(y, pred.mean, np.sqrt(pred.var + s.noise_var))
    expected = -np.log(dens / 4) + np.log(data.y_std)
    assert_allclose(nlpd, expected, rtol=0, atol=1e-10)


def test_mse_matches_loop():
    Z = bark.sample_uniform(square, 15, rng)
    y_raw = rng.normal(size=15)
    total = 0.
    for z, target in zip(Z, y_raw):
        mean = np.mean([bark.predict(s, z).mean for s in ensemble.states])
        total += (data.y_mean + data.y_std * mean - target) ** 2
    assert_allclose(bark.mixture_mse(ensemble, Z, y_raw), total / 15,
                    rtol=0, atol=1e-12)


def test_predict_raw_scale():
    Z = bark.sample_uniform(square, 6, rng)
    pred = ensemble.predict(Z)
    raw = ensemble.predict_raw(Z)
    assert_allclose(raw.mean, data.y_mean + data.y_std * pred.mean,
                    rtol=1e-12)
    assert_allclose(raw.var, data.y_std ** 2 * pred.var, rtol=1e-12)


def test_mse_interpolation_and_prior_limits():
    line = bark.FeatureSpace([bark.Continuous(0, 1)])
    tree = bark.Tree.stump(line).grow((), bark.NumericSplit(0, 0.3))
    tree = tree.grow((1,), bark.NumericSplit(0, 0.7))
    forest = bark.Forest([tree] * 3)
    train = bark.standardize(line, [[0.1], [0.9]], [5., 1.])
    states = [bark.GpState(forest, 1e-8, train.X, train.y)]
    tight = bark.PosteriorEnsemble(states, train)
    assert bark.mixture_mse(tight, train.X, train.y_raw) < 1e-6

    # The middle cell shares no leaf with the data: prediction is y_mean
    mse = bark.mixture_mse(tight, [[0.5], [0.5]], train.y_raw)
    assert_allclose(mse, train.y_std ** 2)


def test_serialization_roundtrip():
    spec = json.loads(json.dumps(ensemble.to_dict()))
    again = bark.PosteriorEnsemble.from_dict(spec, data)
    for a, b in zip(ensemble.states, again.states):
        assert_allclose(a.mll, b.mll)
        assert a.forest == b.forest

    other = bark.standardize(square, data.X, 2 * data.y_raw)
    assert_raises(ValueError, bark.PosteriorEnsemble.from_dict, spec, other)


def test_ensemble_requires_matching_data():
    other = bark.standardize(square, data.X[:5], data.y_raw[:5])
    assert_raises(ValueError, bark.PosteriorEnsemble, ensemble.states, other)
    assert_raises(ValueError, bark.PosteriorEnsemble, [], data)
