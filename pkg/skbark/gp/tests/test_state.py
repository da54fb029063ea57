import time

import numpy as np
from numpy.testing import assert_allclose, assert_raises

import skbark as bark


def setup_module():
    global square, line, isolating

    line = bark.FeatureSpace([bark.Continuous(0, 1)])
    square = bark.FeatureSpace([bark.Continuous(0, 1), bark.Continuous(0, 1)])

    # Cells [0, .3], (.3, .7], (.7, 1] in every tree
    tree = bark.Tree.stump(line).grow((), bark.NumericSplit(0, 0.3))
    tree = tree.grow((1,), bark.NumericSplit(0, 0.7))
    isolating = bark.Forest([tree] * 4)


def _dense_mll(K, noise, y):
    A = K + noise * np.eye(y.size)
    sign, logdet = np.linalg.slogdet(A)
    return (-0.5 * y.dot(np.linalg.solve(A, y)) - 0.5 * logdet -
            0.5 * y.size * np.log(2 * np.pi))


def _random_state(N, m, seed, noise=0.3):
    rng = np.random.default_rng(seed)
    forest = bark.sample_forest_prior(square, m, 0.95, 1., rng)
    X = bark.sample_uniform(square, N, rng)
    y = rng.normal(size=N)
    return bark.GpState(forest, noise, X, y), rng


def _random_move(state, rng):
    t = rng.integers(state.m)
    tree = state.forest[t]
    move = rng.integers(3)
    singly = tree.singly_internal()
    if move == 1 and singly:
        node = singly[rng.integers(len(singly))]
        return t, tree.prune(node.path)
    if move == 2 and tree.decisions:
        node = tree.decisions[rng.integers(len(tree.decisions))]
        new = tree.change(node.path, bark.sample_rule(node.box, rng))
        if new.is_valid():
            return t, new
    leaf = tree.leaves[rng.integers(tree.n_leaves)]
    return t, tree.grow(leaf.path, bark.sample_rule(leaf.box, rng))


def test_mll_single_point():
    forest = bark.sample_forest_prior(line, 3, 0.95, 2,
                                      np.random.default_rng(0))
    state = bark.GpState(forest, 1., [[0.4]], [0.])
    assert_allclose(bark.marginal_log_likelihood(state),
                    -0.5 * np.log(4 * np.pi))
    assert_allclose(state.mll, -1.26551, atol=1e-5)

    state = bark.GpState(forest, 1., [[0.4]], [1.])
    assert_allclose(state.mll, -0.5 * np.log(4 * np.pi) - 0.25)


def test_mll_matches_dense():
    state, _ = _random_state(30, 10, 1)
    K = bark.gram(state.forest, 1., state.X)
    assert_allclose(state.mll, _dense_mll(K, 0.3, state.y), rtol=0,
                    atol=1e-8)
    other = np.arange(30.) / 30
    assert_allclose(bark.marginal_log_likelihood(state, other),
                    _dense_mll(K, 0.3, other), rtol=0, atol=1e-8)


def test_empty_state():
    forest = bark.sample_forest_prior(square, 3, 0.95, 2,
                                      np.random.default_rng(2))
    state = bark.GpState(forest, 0.5, np.zeros((0, 2)), [])
    assert state.mll == 0
    tree = bark.Tree.stump(square).grow((), bark.NumericSplit(0, 0.5))
    candidate, delta = bark.update_tree_lowrank(state, 0, tree)
    assert delta == 0
    state.accept(candidate)
    assert state.forest[0] == tree


def test_woodbury_rank_one():
    new_inv, delta = bark.woodbury_update(np.eye(4), np.eye(4)[:, :1], [1])
    assert_allclose(np.diag(new_inv), [0.5, 1, 1, 1])
    assert_allclose(delta, np.log(2))


def test_lowrank_identity_update():
    state, _ = _random_state(40, 10, 3)
    candidate, delta = bark.update_tree_lowrank(state, 2, state.forest[2])
    assert abs(delta) < 1e-10
    K = state.K.copy()
    state.accept(candidate)
    assert_allclose(state.K, K)


def test_lowrank_matches_scratch():
    state, rng = _random_state(60, 10, 4)
    for _ in range(20):
        t, tree = _random_move(state, rng)
        candidate, delta = bark.update_tree_lowrank(state, t, tree)
        K = bark.gram(state.forest.replace(t, tree), 1., state.X)
        expected = _dense_mll(K, state.noise_var, state.y) - state.mll
        assert abs(delta - expected) < 1e-8


def test_lowrank_faster_than_refactorization():
    state, rng = _random_state(200, 20, 5)
    leaf = state.forest[0].leaves[0]
    tree = state.forest[0].grow(leaf.path, bark.sample_rule(leaf.box, rng))

    fast = []
    slow = []
    for _ in range(5):
        start = time.perf_counter()
        candidate, delta = bark.update_tree_lowrank(state, 0, tree)
        fast.append(time.perf_counter() - start)
        start = time.perf_counter()
        full = bark.GpState(state.forest.replace(0, tree), state.noise_var,
                            state.X, state.y)
        slow.append(time.perf_counter() - start)
    assert abs(delta - (full.mll - state.mll)) < 1e-8
    assert min(fast) < min(slow)


def test_incremental_matches_scratch_after_many_updates():
    state, rng = _random_state(100, 10, 6)
    state.refresh_every = 10 ** 6
    for _ in range(500):
        t, tree = _random_move(state, rng)
        candidate, _ = bark.update_tree_lowrank(state, t, tree)
        state.accept(candidate)
    errors = state.check()
    assert errors['mll'] < 1e-6
    assert errors['alpha'] < 1e-6
    assert errors['logdet'] < 1e-6
    K = bark.gram(state.forest, 1., state.X)
    assert_allclose(state.K, K, atol=1e-10)


def test_update_noise():
    state, _ = _random_state(50, 10, 7)
    _, delta = bark.update_noise(state, state.noise_var)
    assert delta == 0

    candidate, delta = bark.update_noise(state, 0.9)
    K = bark.gram(state.forest, 1., state.X)
    assert abs(delta - (_dense_mll(K, 0.9, state.y) - state.mll)) < 1e-8
    state.accept(candidate)
    assert state.noise_var == 0.9
    assert state.check()['mll'] < 1e-8

    assert_raises(ValueError, bark.update_noise, state, 0.)


def test_update_noise_single_point():
    forest = bark.sample_forest_prior(line, 2, 0.95, 2,
                                      np.random.default_rng(8))
    state = bark.GpState(forest, 1., [[0.2]], [0.])
    _, delta = bark.update_noise(state, 3.)
    assert_allclose(delta, -0.5 * np.log(2))


def test_predict_interpolates_isolated_points():
    X = np.array([[0.1], [0.5], [0.9]])
    y = np.array([1.2, -0.4, 0.3])
    state = bark.GpState(isolating, 1e-8, X, y)
    pred = bark.predict(state, [0.5])
    assert abs(pred.mean - y[1]) < 1e-4
    assert pred.var < 1e-4


def test_predict_reverts_to_prior():
    state = bark.GpState(isolating, 0.1, [[0.1], [0.9]], [1., -1.])
    pred = bark.predict(state, [0.5])
    assert pred.mean == 0
    assert pred.var == 1
    assert bark.predict_mean_by_leaf_sums(state, [0.5]) == 0


def test_predict_matches_dense():
    state, rng = _random_state(25, 10, 9)
    Z = bark.sample_uniform(square, 30, rng)
    pred = bark.predict(state, Z)
    Kzx = bark.cross(state.forest, 1., Z, state.X)
    A = state.K + state.noise_var * np.eye(25)
    mean = Kzx.dot(np.linalg.solve(A, state.y))
    var = 1 - np.einsum('ij,ji->i', Kzx, np.linalg.solve(A, Kzx.T))
    assert_allclose(pred.mean, mean, rtol=0, atol=1e-8)
    assert_allclose(pred.var, np.clip(var, 0, 1), rtol=0, atol=1e-8)
    assert np.all((pred.var >= 0) & (pred.var <= 1))


def test_mean_by_leaf_sums():
    state, rng = _random_state(30, 10, 10)
    Z = bark.sample_uniform(square, 100, rng)
    assert_allclose(bark.predict_mean_by_leaf_sums(state, Z),
                    bark.predict(state, Z).mean, rtol=0, atol=1e-10)

    stump = bark.Forest([bark.Tree.stump(square)])
    single = bark.GpState(stump, 0.5, [[0.3, 0.3]], [2.])
    w = 2. / 1.5
    for z in Z[:5]:
        assert_allclose(bark.predict_mean_by_leaf_sums(single, z), w)
