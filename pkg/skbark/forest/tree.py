"""
tree.py : Immutable decision trees and forests over mixed feature spaces.
"""
from collections import namedtuple

import numpy as np


MAX_DEPTH = 30

NodeCounts = namedtuple('NodeCounts', ['w0', 'w1'])
LeafInfo = namedtuple('LeafInfo', ['path', 'depth', 'box'])
DecisionInfo = namedtuple('DecisionInfo',
                          ['path', 'depth', 'box', 'rule', 'singly_internal'])


class NumericSplit(object):
    """
    Threshold rule on a continuous or integer feature.

    A point goes left iff ``x[feature] <= threshold``.
    """
    __slots__ = ('feature', 'threshold')
    is_categorical = False

    def __init__(self, feature, threshold):
        self.feature = int(feature)
        self.threshold = float(threshold)

    def goes_left(self, X):
        return X[..., self.feature] <= self.threshold

    def __eq__(self, other):
        return (isinstance(other, NumericSplit) and
                self.feature == other.feature and
                self.threshold == other.threshold)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.feature, self.threshold))

    def __repr__(self):
        return "NumericSplit({0}, {1!r})".format(self.feature, self.threshold)

    def to_dict(self):
        return {'feature': self.feature, 'threshold': self.threshold}


class CategoricalSplit(object):
    """
    Subset rule on a categorical feature.

    A point goes left iff ``x[feature]`` is in `left_set`.
    """
    __slots__ = ('feature', 'left_set')
    is_categorical = True

    def __init__(self, feature, left_set):
        self.feature = int(feature)
        self.left_set = frozenset(int(c) for c in left_set)
        if len(self.left_set) == 0:
            raise ValueError("Categorical left_set must be nonempty.")

    def goes_left(self, X):
        return np.isin(X[..., self.feature], list(self.left_set))

    def __eq__(self, other):
        return (isinstance(other, CategoricalSplit) and
                self.feature == other.feature and
                self.left_set == other.left_set)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.feature, self.left_set))

    def __repr__(self):
        return "CategoricalSplit({0}, {1})".format(self.feature,
                                                   sorted(self.left_set))

    def to_dict(self):
        return {'feature': self.feature, 'left_set': sorted(self.left_set)}


def rule_from_dict(spec):
    if 'left_set' in spec:
        return CategoricalSplit(spec['feature'], spec['left_set'])
    return NumericSplit(spec['feature'], spec['threshold'])


class Leaf(object):
    __slots__ = ()
    is_leaf = True

    def __repr__(self):
        return "Leaf()"


class Decision(object):
    __slots__ = ('rule', 'left', 'right')
    is_leaf = False

    def __init__(self, rule, left, right):
        self.rule = rule
        self.left = left
        self.right = right

    def __repr__(self):
        return "Decision({0!r}, {1!r}, {2!r})".format(self.rule, self.left,
                                                      self.right)


def _same_structure(a, b):
    if a.is_leaf or b.is_leaf:
        return a.is_leaf and b.is_leaf
    return (a.rule == b.rule and _same_structure(a.left, b.left) and
            _same_structure(a.right, b.right))


def _replace(node, path, new):
    # Rebuild the spine down to `path`; untouched subtrees are shared.
    if len(path) == 0:
        return new
    if path[0] == 0:
        return Decision(node.rule, _replace(node.left, path[1:], new),
                        node.right)
    return Decision(node.rule, node.left, _replace(node.right, path[1:], new))


def _route(node, X, idx, out, counter):
    if node.is_leaf:
        out[idx] = counter
        return counter + 1
    mask = node.rule.goes_left(X[idx])
    counter = _route(node.left, X, idx[mask], out, counter)
    return _route(node.right, X, idx[~mask], out, counter)


class Tree(object):
    """
    Binary decision tree over a FeatureSpace.

    Trees are immutable. `grow`, `prune` and `change` return new trees that
    share every untouched subtree with the original.

    Parameters
    ----------
    root : Leaf or Decision
        Root node.
    space : FeatureSpace
        Domain the tree partitions.

    Attributes
    ----------
    leaves : list of LeafInfo
        Leaves in left-to-right order; the list position is the leaf id.
        Each entry holds the path from the root (tuple of 0 = left,
        1 = right), the depth and the Box of the leaf.
    decisions : list of DecisionInfo
        Decision nodes in pre-order.
    """

    def __init__(self, root, space):
        self.root = root
        self.space = space
        self.leaves = []
        self.decisions = []
        self._walk(root, (), space.full_box())
        self._leaf_ids = dict((leaf.path, k)
                              for k, leaf in enumerate(self.leaves))

    @classmethod
    def stump(cls, space):
        """The single-leaf tree."""
        return cls(Leaf(), space)

    def _walk(self, node, path, box):
        if len(path) > MAX_DEPTH:
            raise ValueError("Tree deeper than the cap of {0}.".format(
                MAX_DEPTH))
        if node.is_leaf:
            self.leaves.append(LeafInfo(path, len(path), box))
            return
        singly = node.left.is_leaf and node.right.is_leaf
        self.decisions.append(
            DecisionInfo(path, len(path), box, node.rule, singly))
        left, right = box.split(node.rule)
        self._walk(node.left, path + (0,), left)
        self._walk(node.right, path + (1,), right)

    def __eq__(self, other):
        return (isinstance(other, Tree) and
                _same_structure(self.root, other.root))

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return "Tree({0!r})".format(self.root)

    @property
    def n_leaves(self):
        return len(self.leaves)

    @property
    def depth(self):
        return max(leaf.depth for leaf in self.leaves)

    def node_at(self, path):
        node = self.root
        for step in path:
            node = node.right if step else node.left
        return node

    def leaf_id(self, path):
        return self._leaf_ids[tuple(path)]

    def is_valid(self):
        """True if every rule splits its node's box into two nonempty parts."""
        return all(d.box.splits_properly(d.rule) for d in self.decisions)

    def singly_internal(self):
        """Decision nodes whose two children are both leaves."""
        return [d for d in self.decisions if d.singly_internal]

    def grow(self, path, rule):
        """Return the tree with the leaf at `path` split by `rule`."""
        if not self.node_at(path).is_leaf:
            raise ValueError("No leaf at path {0}.".format(path))
        return Tree(_replace(self.root, tuple(path),
                             Decision(rule, Leaf(), Leaf())), self.space)

    def prune(self, path):
        """Return the tree with the singly-internal node at `path` removed."""
        node = self.node_at(path)
        if node.is_leaf or not (node.left.is_leaf and node.right.is_leaf):
            raise ValueError("No singly-internal node at path {0}.".format(
                path))
        return Tree(_replace(self.root, tuple(path), Leaf()), self.space)

    def change(self, path, rule):
        """
        Return the tree with the rule at `path` replaced.

        The result may be invalid when the new rule empties a descendant
        leaf; check with `is_valid`.
        """
        node = self.node_at(path)
        if node.is_leaf:
            raise ValueError("No decision node at path {0}.".format(path))
        return Tree(_replace(self.root, tuple(path),
                             Decision(rule, node.left, node.right)),
                    self.space)

    def leaf_index(self, X):
        """
        Leaf id of each point.

        Parameters
        ----------
        X : 2d array, (N, D)

        Returns
        -------
        ids : 1d int array, length N
        """
        X = np.atleast_2d(X)
        out = np.empty(X.shape[0], dtype=int)
        _route(self.root, X, np.arange(X.shape[0]), out, 0)
        return out

    def membership(self, X):
        """One-hot leaf membership matrix Phi, shape (N, L)."""
        ids = self.leaf_index(X)
        phi = np.zeros((ids.size, self.n_leaves))
        phi[np.arange(ids.size), ids] = 1.
        return phi

    def to_dict(self):
        counter = [0]

        def encode(node):
            if node.is_leaf:
                counter[0] += 1
                return {'leaf_id': counter[0] - 1}
            spec = node.rule.to_dict()
            spec['left'] = encode(node.left)
            spec['right'] = encode(node.right)
            return spec

        return encode(self.root)

    @classmethod
    def from_dict(cls, spec, space):
        def decode(node):
            if 'leaf_id' in node:
                return Leaf()
            return Decision(rule_from_dict(node), decode(node['left']),
                            decode(node['right']))

        tree = cls(decode(spec), space)
        if not tree.is_valid():
            raise ValueError("Serialized tree has a rule outside its "
                             "node's box.")
        return tree


def leaf_vector(tree, x):
    """
    One-hot leaf membership of a single point.

    Parameters
    ----------
    tree : Tree
    x : 1d array, length D
        Point inside the tree's domain.

    Returns
    -------
    phi : 1d array, length L
        Exactly one entry equals 1.

    Raises
    ------
    ValueError
        If `x` lies outside the feature space.
    """
    x = tree.space.check_points(x)
    phi = np.zeros(tree.n_leaves)
    phi[tree.leaf_index(x)[0]] = 1.
    return phi


def node_counts(tree):
    """
    Count leaves and singly-internal decision nodes.

    Parameters
    ----------
    tree : Tree

    Returns
    -------
    counts : NodeCounts
        ``w0`` leaves and ``w1`` decision nodes with two leaf children.
    """
    return NodeCounts(tree.n_leaves, len(tree.singly_internal()))


class Forest(object):
    """
    Fixed-size ensemble of trees over one FeatureSpace.

    Parameters
    ----------
    trees : list of Tree
        At least one tree.
    """

    def __init__(self, trees):
        trees = list(trees)
        if len(trees) == 0:
            raise ValueError("A Forest needs at least one tree.")
        self.trees = trees
        self.space = trees[0].space

    def __len__(self):
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __getitem__(self, t):
        return self.trees[t]

    def __eq__(self, other):
        return isinstance(other, Forest) and self.trees == other.trees

    def __ne__(self, other):
        return not self.__eq__(other)

    @property
    def m(self):
        return len(self.trees)

    def total_leaves(self):
        return sum(tree.n_leaves for tree in self.trees)

    def replace(self, t, tree):
        """Return a new forest with tree `t` replaced."""
        trees = list(self.trees)
        trees[t] = tree
        return Forest(trees)

    def leaf_indices(self, X):
        """Leaf ids, shape (N, m)."""
        X = np.atleast_2d(X)
        return np.column_stack([tree.leaf_index(X) for tree in self.trees])

    def to_dict(self):
        return {'trees': [tree.to_dict() for tree in self.trees]}

    @classmethod
    def from_dict(cls, spec, space):
        return cls([Tree.from_dict(t, space) for t in spec['trees']])

