import numpy as np
from numpy.testing import assert_allclose, assert_array_equal, assert_raises
from scipy import stats

import skbark as bark


def setup_module():
    global square, line, empty, step_data

    square = bark.FeatureSpace([bark.Continuous(0, 1), bark.Continuous(0, 1)])
    line = bark.FeatureSpace([bark.Continuous(0, 1)])
    empty = bark.Dataset(square, np.zeros((0, 2)), [])

    rng = np.random.default_rng(40)
    X = rng.uniform(size=(30, 1))
    y = (X[:, 0] > 0.5) + 0.1 * rng.normal(size=30)
    step_data = bark.standardize(line, X, y)


def _chain(data, config, seed, forest=None):
    rng = np.random.default_rng(seed)
    if forest is None:
        forest = bark.Forest([bark.Tree.stump(data.space)] * config.m)
    prior = bark.NoisePrior(config.nu, config.q)
    state = bark.GpState(forest, prior.median(), data.X, data.y)
    return bark.ChainState(state, config, rng, prior)


def test_config_defaults():
    config = bark.SamplerConfig()
    assert config.kept_per_chain == 4
    assert config.n_samples == 16
    assert config.move_weights == (0.25, 0.25, 0.5)
    assert bark.SamplerConfig.from_dict(config.to_dict()) == config


def test_config_validation():
    assert_raises(ValueError, bark.SamplerConfig, move_weights=(0.3, 0.2, .5))
    assert_raises(ValueError, bark.SamplerConfig, alpha=1.)
    assert_raises(ValueError, bark.SamplerConfig, thin=500)
    assert_raises(ValueError, bark.SamplerConfig, split_sampling='grid')
    assert_raises(ValueError, bark.SamplerConfig.from_dict, {'trees': 5})


def test_prior_recovery_without_data():
    config = bark.SamplerConfig(m=20)
    chain = _chain(empty, config, 0)
    for _ in range(200):
        bark.mh_step(chain)
    root, leaves = [], []
    for _ in range(2000):
        bark.mh_step(chain)
        root.extend(not tree.root.is_leaf for tree in chain.state.forest)
        leaves.extend(tree.n_leaves for tree in chain.state.forest)
    assert abs(np.mean(root) - 0.95) < 0.02
    expected = bark.expected_leaf_count(0.95, 2.)
    assert abs(np.mean(leaves) - expected) < 0.15


def _prior_match(space, classify, n_classes, seed, m=40, sweeps=1000,
                 thin=10, n_direct=20000):
    # Chi-square p-value of per-tree class counts, chain against direct draws
    config = bark.SamplerConfig(m=m)
    data = bark.Dataset(space, np.zeros((0, space.D)), [])
    chain = _chain(data, config, seed)
    for _ in range(100):
        chain.sweep()
    chained = np.zeros(n_classes)
    for i in range(sweeps):
        chain.sweep()
        if (i + 1) % thin == 0:
            for tree in chain.state.forest:
                chained[classify(tree)] += 1

    rng = np.random.default_rng(seed + 1)
    direct = np.zeros(n_classes)
    for _ in range(n_direct):
        direct[classify(bark.sample_tree_prior(space, 0.95, 2., rng))] += 1
    return stats.chi2_contingency(np.vstack([chained, direct]))[1]


def _leaf_class(tree):
    return min(tree.n_leaves, 4) - 1


def _categorical_class(tree):
    # Two-leaf trees are told apart by a lopsided or a balanced root split
    if tree.n_leaves == 2:
        return 3 + int(len(tree.root.rule.left_set) == 2)
    return {1: 0, 3: 1}.get(tree.n_leaves, 2)


def test_prior_leaf_counts_continuous():
    assert _prior_match(line, _leaf_class, 4, 10) > 1e-3


def test_prior_leaf_counts_integer():
    levels = bark.FeatureSpace([bark.Integer(0, 4)])
    assert _prior_match(levels, _leaf_class, 4, 20) > 1e-3


def test_prior_tree_shapes_categorical():
    cats = bark.FeatureSpace([bark.Categorical(4)])
    assert _prior_match(cats, _categorical_class, 5, 30) > 1e-3


def test_noise_chain_recovers_prior():
    config = bark.SamplerConfig(m=1)
    chain = _chain(empty, config, 1)
    draws = np.empty(40000)
    for i in range(draws.size):
        chain.noise_step()
        draws[i] = chain.state.noise_var
    assert abs(np.mean(draws < 1) - 0.9) < 0.04
    assert abs(np.mean(draws < chain.noise_prior.median()) - 0.5) < 0.05


def test_change_moves_keep_leaf_counts():
    rng = np.random.default_rng(2)
    trees = []
    for _ in range(5):
        tree = bark.sample_tree_prior(line, 0.95, 1., rng)
        if tree.n_leaves == 1:
            tree = tree.grow((), bark.NumericSplit(0, 0.5))
        trees.append(tree)
    config = bark.SamplerConfig(m=5)
    chain = _chain(step_data, config, 3, bark.Forest(trees))
    chain._select_move = lambda tree: ('change', 0.)
    counts = [tree.n_leaves for tree in trees]
    for _ in range(50):
        bark.mh_step(chain)
        assert [t.n_leaves for t in chain.state.forest] == counts
    assert chain.proposed['grow'] == chain.proposed['prune'] == 0


def test_fit_improves_on_prior():
    config = bark.SamplerConfig(m=10)
    prior = bark.NoisePrior()
    for seed in range(3):
        rng = np.random.default_rng(100 + seed)
        forest = bark.sample_forest_prior(line, 10, 0.95, 2., rng)
        prior_mll = bark.GpState(forest, prior.median(), step_data.X,
                                 step_data.y).mll
        chain = _chain(step_data, config, 200 + seed)
        for _ in range(100):
            bark.mh_step(chain)
        assert chain.mll_trace()[50:].mean() > prior_mll


def test_chain_caches_and_acceptance():
    config = bark.SamplerConfig(m=10)
    chain = _chain(step_data, config, 4)
    for _ in range(60):
        bark.mh_step(chain)
    assert chain.state.check()['mll'] < 1e-6
    rates = chain.acceptance_rates()
    for move in ('grow', 'prune', 'change', 'noise'):
        assert 0 < rates[move] < 1

    frame = chain.diagnostics_frame()
    assert list(frame.columns) == ['chain', 'sweep', 'mll', 'sigma_y_sq',
                                   'total_leaves', 'accept_grow',
                                   'accept_prune', 'accept_change',
                                   'accept_noise']
    assert len(frame) == 60
    assert_allclose(frame['mll'].to_numpy(), chain.mll_trace())


def test_run_chains_counts_and_warm_start():
    config = bark.SamplerConfig(m=5, chains=4, burn_in=5,
                                samples_per_chain=40, thin=10)
    ensemble = bark.run_chains(step_data, config, seed=0)
    assert ensemble.S == 16
    assert len(ensemble.final_states) == 4
    assert ensemble.burn_in_sweeps == 5
    assert len(ensemble.diagnostics) == 4 * 45

    warm = bark.run_chains(step_data, config, init=ensemble.final_states,
                           seed=1)
    assert warm.burn_in_sweeps == 0
    assert len(warm.diagnostics) == 4 * 40

    one = bark.run_chains(step_data, config.replace(
        chains=1, samples_per_chain=10, thin=10), seed=2)
    assert one.S == 1

    assert_raises(ValueError, bark.run_chains, step_data, config,
                  ensemble.final_states[:2])


def test_run_chains_deterministic_across_threads():
    config = bark.SamplerConfig(m=4, chains=3, burn_in=3,
                                samples_per_chain=6, thin=3)
    a = bark.run_chains(step_data, config.replace(threads=1), seed=7)
    b = bark.run_chains(step_data, config.replace(threads=3), seed=7)
    assert_array_equal(a.diagnostics['mll'], b.diagnostics['mll'])
    for s, t in zip(a.states, b.states):
        assert s.forest == t.forest


def test_run_chains_prior_only():
    config = bark.SamplerConfig(m=3, chains=2, samples_per_chain=20, thin=5,
                                prior_only=True)
    ensemble = bark.run_chains(step_data, config, seed=3)
    assert ensemble.S == 8
    assert len(ensemble.diagnostics) == 0
    assert ensemble.final_states is None


def test_data_split_sampling():
    config = bark.SamplerConfig(m=4, split_sampling='data')
    chain = _chain(step_data, config, 5)
    for _ in range(20):
        bark.mh_step(chain)
    observed = np.sort(step_data.X[:, 0])
    mids = 0.5 * (observed[1:] + observed[:-1])
    checked = 0
    for tree in chain.state.forest:
        for node in tree.decisions:
            # Boxes holding fewer than two points fall back to uniform rules
            if node.box.contains(step_data.X).sum() >= 2:
                assert np.isclose(node.rule.threshold, mids).any()
                checked += 1
    assert checked > 0


def test_autocorrelation_examples():
    alt = 3 + np.tile([1., -1.], 50)
    assert_allclose(bark.autocorrelation(alt, 2)[:2], [1, -1])
    assert_array_equal(bark.autocorrelation(np.ones(10), 3), np.ones(4))
    assert_raises(ValueError, bark.autocorrelation, np.ones(3), 3)

    rng = np.random.default_rng(6)
    white = rng.normal(size=10 ** 4)
    rho = bark.autocorrelation(white, 50)
    assert np.mean(np.abs(rho[1:]) < 4 / np.sqrt(10 ** 4)) > 0.95


def test_autocorrelation_ar1():
    rng = np.random.default_rng(7)
    n = 10 ** 5
    x = np.empty(n)
    x[0] = rng.normal()
    eps = rng.normal(size=n) * np.sqrt(1 - 0.81)
    for i in range(1, n):
        x[i] = 0.9 * x[i - 1] + eps[i]
    rho = bark.autocorrelation(x, 10)
    assert_allclose(rho, 0.9 ** np.arange(11), atol=0.05)

    ess = bark.effective_sample_size(x)
    assert abs(ess / (n * 0.1 / 1.9) - 1) < 0.3
    white = rng.normal(size=5000)
    assert bark.effective_sample_size(white) > 0.7 * 5000
