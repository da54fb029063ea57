import json

import numpy as np
from numpy.testing import assert_array_equal, assert_raises

import skbark as bark


def setup_module():
    global line, square, caterpillar

    line = bark.FeatureSpace([bark.Continuous(0, 1)])
    square = bark.FeatureSpace([bark.Continuous(0, 1), bark.Continuous(0, 1)])

    # Root split on x0, left child split again on x1
    caterpillar = bark.Tree(
        bark.Decision(bark.NumericSplit(0, 0.5),
                      bark.Decision(bark.NumericSplit(1, 0.3),
                                    bark.Leaf(), bark.Leaf()),
                      bark.Leaf()),
        square)


def test_leaf_vector_single_leaf():
    tree = bark.Tree.stump(line)
    assert_array_equal(bark.leaf_vector(tree, [0.42]), [1])


def test_leaf_vector_root_split():
    tree = bark.Tree.stump(line).grow((), bark.NumericSplit(0, 0.5))
    assert_array_equal(bark.leaf_vector(tree, [0.25]), [1, 0])
    assert_array_equal(bark.leaf_vector(tree, [0.75]), [0, 1])
    assert_array_equal(bark.leaf_vector(tree, [0.5]), [1, 0])


def test_leaf_vector_out_of_domain():
    tree = bark.Tree.stump(line)
    assert_raises(ValueError, bark.leaf_vector, tree, [1.5])


def test_leaf_cells_tile_grid():
    g = np.linspace(0, 1, 41)
    X = np.array([[a, b] for a in g for b in g])
    phi = caterpillar.membership(X)
    assert phi.shape == (X.shape[0], 3)
    assert_array_equal(phi.sum(axis=1), np.ones(X.shape[0]))

    # Each leaf's box contains exactly the points routed to it
    ids = caterpillar.leaf_index(X)
    for k, leaf in enumerate(caterpillar.leaves):
        assert_array_equal(leaf.box.contains(X), ids == k)


def test_leaf_order_left_to_right():
    paths = [leaf.path for leaf in caterpillar.leaves]
    assert paths == [(0, 0), (0, 1), (1,)]
    assert caterpillar.leaf_id((1,)) == 2


def test_node_counts():
    assert bark.node_counts(bark.Tree.stump(square)) == (1, 0)
    one = bark.Tree.stump(square).grow((), bark.NumericSplit(0, 0.5))
    assert bark.node_counts(one) == (2, 1)
    assert bark.node_counts(caterpillar) == (3, 1)


def test_grow_prune_inverse():
    singly = caterpillar.singly_internal()
    assert len(singly) == 1
    node = singly[0]
    pruned = caterpillar.prune(node.path)
    assert pruned.n_leaves == 2
    assert pruned.grow(node.path, node.rule) == caterpillar
    assert pruned != caterpillar


def test_grow_prune_errors():
    assert_raises(ValueError, caterpillar.prune, ())
    assert_raises(ValueError, caterpillar.grow, (0,), bark.NumericSplit(0, .2))
    assert_raises(ValueError, caterpillar.change, (1,),
                  bark.NumericSplit(0, .2))


def test_change_validity():
    moved = caterpillar.change((), bark.NumericSplit(0, 0.25))
    assert moved.is_valid()

    # x1 <= 0.3 inside the left child is fine, but moving the child's rule
    # onto x0 beyond the parent's interval empties a leaf
    bad = caterpillar.change((0,), bark.NumericSplit(0, 0.75))
    assert not bad.is_valid()


def test_structural_sharing():
    grown = caterpillar.grow((1,), bark.NumericSplit(1, 0.9))
    assert grown.root.left is caterpillar.root.left


def test_serialization_roundtrip():
    cats = bark.FeatureSpace([bark.Continuous(0, 1), bark.Categorical(4)])
    rng = np.random.default_rng(11)
    for _ in range(20):
        tree = bark.sample_tree_prior(cats, 0.95, 1., rng)
        text = json.dumps(tree.to_dict())
        again = bark.Tree.from_dict(json.loads(text), cats)
        assert again == tree
        X = bark.sample_uniform(cats, 50, rng)
        assert_array_equal(again.leaf_index(X), tree.leaf_index(X))


def test_from_dict_rejects_empty_leaf():
    spec = {'feature': 0, 'threshold': 0.5,
            'left': {'feature': 0, 'threshold': 0.75,
                     'left': {'leaf_id': 0}, 'right': {'leaf_id': 1}},
            'right': {'leaf_id': 2}}
    assert_raises(ValueError, bark.Tree.from_dict, spec, line)


def test_forest_leaf_indices():
    forest = bark.Forest([caterpillar, bark.Tree.stump(square)])
    X = np.array([[0.2, 0.1], [0.2, 0.9], [0.8, 0.5]])
    assert_array_equal(forest.leaf_indices(X), [[0, 0], [1, 0], [2, 0]])
    assert forest.total_leaves() == 4
    swapped = forest.replace(1, caterpillar)
    assert swapped[1] == caterpillar
    assert forest[1] != caterpillar
    assert_raises(ValueError, bark.Forest, [])
