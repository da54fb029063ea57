import numpy as np
from numpy.testing import assert_allclose, assert_raises
from scipy import stats
from scipy.special import gammaln

import skbark as bark


def setup_module():
    global square, prior, caterpillar

    square = bark.FeatureSpace([bark.Continuous(0, 1), bark.Continuous(0, 1)])
    prior = bark.NoisePrior(3, 0.9)
    caterpillar = bark.Tree(
        bark.Decision(bark.NumericSplit(0, 0.5),
                      bark.Decision(bark.NumericSplit(1, 0.3),
                                    bark.Leaf(), bark.Leaf()),
                      bark.Leaf()),
        square)


def test_noise_scale_cdf():
    for nu, q in [(3, 0.9), (3, 0.5), (10, 0.99), (1, 0.75)]:
        noise = bark.NoisePrior(nu, q)
        assert abs(noise.cdf(1.) - q) < 1e-8


def test_noise_scale_monte_carlo():
    rng = np.random.default_rng(0)
    n = 10 ** 6
    draws = prior.sample(rng, size=n)
    frac = np.mean(draws < 1)
    assert abs(frac - 0.9) < 4 * np.sqrt(0.09 / n)


def test_noise_scale_median():
    half = bark.NoisePrior(3, 0.5)
    assert_allclose(half.median(), 1., atol=1e-8)
    draws = half.sample(np.random.default_rng(1), size=10 ** 5)
    assert abs(np.median(draws) - 1) < 0.02


def test_noise_scale_monotone():
    assert bark.solve_noise_scale(3, 0.95) < bark.solve_noise_scale(3, 0.5)


def test_noise_scale_errors():
    assert_raises(ValueError, bark.solve_noise_scale, 0, 0.9)
    assert_raises(ValueError, bark.solve_noise_scale, 3, 1.)


def test_grow_ratio_from_root():
    stump = bark.Tree.stump(square)
    leaf = stump.leaves[0]
    rule = bark.NumericSplit(0, 0.5)
    trans, pri = bark.grow_ratios(stump, leaf, rule, 0.95, 2)
    expected = np.log(0.95) + 2 * np.log(0.7625) - np.log(0.05)
    assert_allclose(trans + pri, expected, rtol=1e-12)
    assert trans == 0

    grown = stump.grow((), rule)
    trans2, pri2 = bark.prune_ratios(grown, grown.decisions[0], 0.95, 2)
    assert trans2 + pri2 == -(trans + pri)


def test_grow_ratio_flat_prior():
    stump = bark.Tree.stump(square)
    trans, pri = bark.grow_ratios(stump, stump.leaves[0],
                                  bark.NumericSplit(1, 0.2), 0.5, 0)
    assert_allclose(trans + pri, 2 * np.log(0.5), rtol=1e-12)


def test_grow_ratio_closed_form_deeper():
    alpha, beta = 0.95, 2.
    for path, w1_new in [((0, 0), 1), ((0, 1), 1), ((1,), 2)]:
        leaf = caterpillar.leaves[caterpillar.leaf_id(path)]
        d = leaf.depth
        rule = bark.NumericSplit(1, 0.5 * (leaf.box.lo[1] + leaf.box.hi[1]))
        trans, pri = bark.grow_ratios(caterpillar, leaf, rule, alpha, beta)
        expected = (np.log(3. / w1_new) + np.log(alpha) +
                    2 * np.log(1 - alpha / (2. + d) ** beta) -
                    np.log((1. + d) ** beta - alpha))
        assert_allclose(trans + pri, expected, rtol=1e-12)


def test_grow_ratio_unsplittable_children():
    bits = bark.FeatureSpace([bark.Integer(0, 1)])
    stump = bark.Tree.stump(bits)
    trans, pri = bark.grow_ratios(stump, stump.leaves[0],
                                  bark.NumericSplit(0, 0.5), 0.95, 2)
    assert_allclose(pri, np.log(0.95) - np.log(0.05))

    grown = stump.grow((), bark.NumericSplit(0, 0.5))
    assert_raises(ValueError, bark.grow_ratios, grown, grown.leaves[0],
                  bark.NumericSplit(0, 0.5), 0.95, 2)


def test_grow_prune_antisymmetry_random_trees():
    rng = np.random.default_rng(2)
    for _ in range(50):
        tree = bark.sample_tree_prior(square, 0.95, 1., rng)
        leaf = tree.leaves[rng.integers(tree.n_leaves)]
        rule = bark.sample_rule(leaf.box, rng)
        grown = tree.grow(leaf.path, rule)
        node = [d for d in grown.decisions if d.path == leaf.path][0]
        forward = sum(bark.grow_ratios(tree, leaf, rule, 0.95, 2))
        backward = sum(bark.prune_ratios(grown, node, 0.95, 2))
        assert abs(forward + backward) < 1e-12


def test_change_ratio_zero():
    node = caterpillar.singly_internal()[0]
    assert sum(bark.change_ratios(caterpillar, node,
                                  bark.NumericSplit(0, 0.1))) == 0


def test_change_ratio_tracks_splittable_children():
    cats = bark.FeatureSpace([bark.Categorical(4)])
    lopsided = bark.Tree(bark.Decision(bark.CategoricalSplit(0, [0]),
                                       bark.Leaf(), bark.Leaf()), cats)
    node = lopsided.decisions[0]
    balanced = bark.CategoricalSplit(0, [0, 1])

    # The lone-category child cannot split; both halves of a 2-2 split can
    p = 0.95 / 4
    trans, pri = bark.change_ratios(lopsided, node, balanced, 0.95, 2)
    assert trans == 0
    assert_allclose(pri, np.log1p(-p), rtol=1e-12)

    changed = lopsided.change((), balanced)
    back = bark.change_ratios(changed, changed.decisions[0],
                              bark.CategoricalSplit(0, [0]), 0.95, 2)
    assert_allclose(sum(back), -pri, rtol=1e-12)

    assert sum(bark.change_ratios(lopsided, node,
                                  bark.CategoricalSplit(0, [3]), 0.95, 2)) == 0


def _log_proposal(old, new, sd):
    # Density of new given old under the softplus-transformed walk
    theta_old = np.log(np.expm1(old))
    theta_new = np.log(np.expm1(new))
    jacobian = -np.log(-np.expm1(-new))
    return stats.norm.logpdf(theta_new, theta_old, sd) + jacobian


def test_noise_transition_ratio():
    assert bark.noise_log_transition_ratio(0.7, 0.7) == 0
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b = rng.uniform(0.01, 5, size=2)
        ratio = bark.noise_log_transition_ratio(a, b, 0.5)
        expected = _log_proposal(b, a, 0.5) - _log_proposal(a, b, 0.5)
        assert_allclose(ratio, expected, rtol=0, atol=1e-9)
        for sd in (0.05, 2.):
            assert_allclose(bark.noise_log_transition_ratio(a, b, sd), ratio,
                            rtol=0, atol=1e-12)
            assert_allclose(_log_proposal(b, a, sd) - _log_proposal(a, b, sd),
                            ratio, rtol=0, atol=1e-9)
        assert_allclose(bark.noise_log_transition_ratio(b, a, 0.5), -ratio,
                        rtol=0, atol=1e-12)
    assert_raises(ValueError, bark.noise_log_transition_ratio, 0., 1.)


def test_noise_prior_ratio():
    assert bark.noise_log_prior_ratio(0.4, 0.4, prior) == 0

    a, b = prior.a, prior.scale

    def logpdf(x):
        return a * np.log(b) - gammaln(a) - (a + 1) * np.log(x) - b / x

    rng = np.random.default_rng(4)
    for _ in range(50):
        s, s2 = rng.uniform(0.01, 4, size=2)
        assert_allclose(bark.noise_log_prior_ratio(s, s2, prior),
                        logpdf(s2) - logpdf(s), rtol=0, atol=1e-12)

    mode = prior.mode()
    for other in [1e-3, 0.1, 0.5, 2., 50.]:
        assert bark.noise_log_prior_ratio(mode, other, prior) <= 0


def test_softplus_inverse():
    s = np.array([1e-6, 0.3, 1., 20., 800.])
    assert_allclose(bark.softplus(bark.softplus_inv(s)), s, rtol=1e-10)
