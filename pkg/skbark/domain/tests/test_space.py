import numpy as np
from numpy.testing import (assert_allclose, assert_array_equal,
                           assert_raises)

import skbark as bark


def setup_module():
    global space, mixed

    space = bark.FeatureSpace([bark.Continuous(0, 1)])
    mixed = bark.FeatureSpace([bark.Continuous(0, 1),
                               bark.Integer(-1, 1),
                               bark.Categorical(5)])


def test_feature_validation():
    assert_raises(ValueError, bark.Continuous, 1, 1)
    assert_raises(ValueError, bark.Integer, 0.5, 3)
    assert_raises(ValueError, bark.Categorical, 1)
    assert_raises(ValueError, bark.FeatureSpace, [])
    assert_raises(ValueError, bark.feature_from_dict,
                  {'type': 'continuous', 'lo': 0, 'hi': 1, 'step': 2})


def test_space_roundtrip_dict():
    again = bark.FeatureSpace.from_dict(mixed.to_dict())
    assert again == mixed
    assert again.names == ['x0', 'x1', 'x2']


def test_box_contains_full_box():
    box = mixed.full_box()
    assert bark.box_contains(box, [0.3, 0, 4])
    assert bark.box_contains(box, [1., -1, 0])


def test_box_contains_restricted():
    box = space.full_box()
    box.hi[0] = 0.5
    assert not bark.box_contains(box, [0.75])
    assert bark.box_contains(box, [0.5])

    box = mixed.full_box()
    box.allowed[2] = frozenset([0, 2])
    assert not bark.box_contains(box, [0.3, 0, 1])
    assert bark.box_contains(box, [0.3, 0, 2])


def test_box_contains_dimension_mismatch():
    assert_raises(ValueError, bark.box_contains, mixed.full_box(), [0.3, 0])


def test_box_split_and_monotone():
    rule = bark.NumericSplit(0, 0.5)
    left, right = space.full_box().split(rule)
    assert bark.box_contains(left, [0.5])
    assert not bark.box_contains(right, [0.5])
    assert bark.box_contains(right, [0.50001])
    assert right.issubset(space.full_box())

    rng = np.random.default_rng(3)
    X = bark.sample_uniform(space, 200, rng)
    inner = left.contains(X)
    outer = space.full_box().contains(X)
    assert np.all(outer[inner])


def test_integer_split_closed_bounds():
    ints = bark.FeatureSpace([bark.Integer(0, 4)])
    left, right = ints.full_box().split(bark.NumericSplit(0, 1.5))
    assert_array_equal(left.hi, [1])
    assert_array_equal(right.lo, [2])
    assert not right.lo_open[0]


def test_representative_inside_box():
    box = mixed.full_box()
    box.allowed[2] = frozenset([3, 4])
    x = box.representative()
    assert_allclose(x, [0.5, 0, 3])
    assert bark.box_contains(box, x)


def test_sample_uniform_in_domain():
    rng = np.random.default_rng(0)
    X = bark.sample_uniform(bark.FeatureSpace([bark.Continuous(0, 1),
                                               bark.Continuous(0, 1)]),
                            5, rng)
    assert X.shape == (5, 2)
    assert np.all((X >= 0) & (X <= 1))
    assert_raises(ValueError, bark.sample_uniform, space, 0, rng)


def test_sample_uniform_categorical_frequencies():
    rng = np.random.default_rng(1)
    n = 10 ** 4
    X = bark.sample_uniform(mixed, n, rng)
    assert np.all(mixed.full_box().contains(X))

    freq = np.bincount(X[:, 2].astype(int), minlength=5) / n
    se = np.sqrt(0.2 * 0.8 / n)
    assert np.all(np.abs(freq - 0.2) < 4 * se)

    # Discrete uniform on {-1, 0, 1} has variance 2/3
    se = np.sqrt(2. / 3 / n)
    assert abs(X[:, 1].mean()) < 4 * se


def test_check_points_rejects_out_of_domain():
    assert_raises(ValueError, mixed.check_points, [0.3, 0.5, 1])
    assert_raises(ValueError, mixed.check_points, [1.3, 0, 1])
    assert_raises(ValueError, mixed.check_points, [0.3, 0, 5])


def test_values_roundtrip():
    cats = bark.FeatureSpace([bark.Integer(0, 3),
                              bark.Categorical(None, labels=['a', 'b', 'c'])])
    values = cats.to_values([2., 1.])
    assert values == [2, 'b']
    assert isinstance(values[0], int)
    assert_array_equal(cats.from_values(values), [2., 1.])
