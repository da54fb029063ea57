"""
prior.py : Node-depth tree prior and split-rule sampling.
"""
import numpy as np

from ..domain.space import CATEGORICAL, INTEGER
from .tree import (MAX_DEPTH, CategoricalSplit, Decision, Forest, Leaf,
                   NumericSplit, Tree)


def split_probability(depth, alpha, beta):
    """
    Prior probability that a node at `depth` is a decision node.

    Parameters
    ----------
    depth : int
        Node depth, 0 at the root.
    alpha : float
        Base split probability, in (0, 1).
    beta : float
        Depth penalty, non-negative.

    Returns
    -------
    p : float
        ``alpha * (1 + depth) ** -beta``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative, got {0}.".format(depth))
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1), got {0}.".format(alpha))
    if beta < 0:
        raise ValueError("beta must be non-negative, got {0}.".format(beta))
    return alpha * (1. + depth) ** (-beta)


def expected_leaf_count(alpha, beta, max_depth=20):
    """
    Expected number of leaves under the node-depth prior.

    Computed by recursion over depth, with nodes at `max_depth` forced to
    be leaves. Assumes every box is splittable, which holds almost surely
    on continuous features.
    """
    expected = 1.
    for d in range(max_depth - 1, -1, -1):
        p = split_probability(d, alpha, beta)
        expected = (1 - p) + p * 2 * expected
    return expected


def _random_subset(allowed, rng):
    # Independent coin per category, rejecting the empty and full sets.
    allowed = np.array(sorted(allowed))
    while True:
        mask = rng.random(allowed.size) < 0.5
        if 0 < mask.sum() < allowed.size:
            return frozenset(allowed[mask].tolist())


def _uniform_rule(box, j, rng):
    kind = box.space.kinds[j]
    if kind == CATEGORICAL:
        return CategoricalSplit(j, _random_subset(box.allowed[j], rng))
    lo, hi = box.lo[j], box.hi[j]
    if kind == INTEGER:
        return NumericSplit(j, lo + rng.integers(hi - lo) + 0.5)
    t = rng.uniform(lo, hi)
    while not lo < t < hi:
        t = rng.uniform(lo, hi)
    return NumericSplit(j, t)


def _data_rule(box, j, values, rng):
    kind = box.space.kinds[j]
    if kind == CATEGORICAL:
        return CategoricalSplit(j, _random_subset(values.astype(int), rng))
    k = rng.integers(values.size - 1)
    if kind == INTEGER:
        return NumericSplit(j, values[k] + 0.5)
    return NumericSplit(j, 0.5 * (values[k] + values[k + 1]))


def sample_rule(box, rng, data=None):
    """
    Draw a split rule uniformly from the part of the domain in `box`.

    Parameters
    ----------
    box : Box
        Subdomain reaching the node. Must have a splittable feature.
    rng : numpy.random.Generator
    data : 2d array (N, D), optional
        Design rows. When given, rules are drawn from the observed values
        inside the box (see Notes).

    Returns
    -------
    rule : NumericSplit or CategoricalSplit

    Raises
    ------
    ValueError
        If no feature of the box can be split.

    Notes
    -----
    The feature is uniform among splittable features. Continuous thresholds
    are uniform on the open box interval, integer thresholds uniform over the
    half-integer cuts, and categorical left sets uniform over the nonempty
    proper subsets of the allowed categories.

    With `data`, the feature is uniform among features taking at least two
    distinct values on the rows inside the box. The cut falls uniformly
    between consecutive distinct values, and categorical left sets are drawn
    from the observed categories. When no feature qualifies the uniform
    sampler is used.
    """
    if data is not None:
        data = np.atleast_2d(data)
        inside = data[box.contains(data)]
        candidates = []
        for j in range(box.space.D):
            values = np.unique(inside[:, j])
            if values.size >= 2:
                candidates.append((j, values))
        if candidates:
            j, values = candidates[rng.integers(len(candidates))]
            return _data_rule(box, j, values, rng)

    features = box.splittable_features()
    if not features:
        raise ValueError("Cannot sample a rule from an unsplittable box "
                         "{0!r}.".format(box))
    j = features[rng.integers(len(features))]
    return _uniform_rule(box, j, rng)


def sample_tree_prior(space, alpha, beta, rng, data=None):
    """
    Draw a tree from the node-depth prior.

    A node at depth d becomes a decision node with probability
    ``split_probability(d, alpha, beta)``, its rule drawn by `sample_rule`.
    Nodes whose box cannot be split, or at the depth cap, are leaves.

    Parameters
    ----------
    space : FeatureSpace
    alpha, beta : float
        Depth prior parameters.
    rng : numpy.random.Generator
    data : 2d array, optional
        Passed to `sample_rule`.

    Returns
    -------
    tree : Tree
    """
    split_probability(0, alpha, beta)

    def build(box, depth):
        if depth >= MAX_DEPTH or not box.splittable_features():
            return Leaf()
        if rng.random() >= split_probability(depth, alpha, beta):
            return Leaf()
        rule = sample_rule(box, rng, data)
        left, right = box.split(rule)
        return Decision(rule, build(left, depth + 1), build(right, depth + 1))

    return Tree(build(space.full_box(), 0), space)


def sample_forest_prior(space, m, alpha, beta, rng, data=None):
    """Draw `m` independent prior trees."""
    if m < 1:
        raise ValueError("m must be at least 1, got {0}.".format(m))
    return Forest([sample_tree_prior(space, alpha, beta, rng, data)
                   for _ in range(m)])
