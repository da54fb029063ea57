"""
Forest subpackage: immutable decision trees with numeric-threshold and
categorical-subset rules, leaf membership, and the node-depth tree prior.

"""
__all__ = ['CategoricalSplit',
           'Decision',
           'Forest',
           'Leaf',
           'MAX_DEPTH',
           'NodeCounts',
           'NumericSplit',
           'Tree',
           'expected_leaf_count',
           'leaf_vector',
           'node_counts',
           'rule_from_dict',
           'sample_forest_prior',
           'sample_rule',
           'sample_tree_prior',
           'split_probability',
           ]

from .tree import (MAX_DEPTH, CategoricalSplit, Decision, Forest, Leaf,
                   NodeCounts, NumericSplit, Tree, leaf_vector, node_counts,
                   rule_from_dict)
from .prior import (expected_leaf_count, sample_forest_prior, sample_rule,
                    sample_tree_prior, split_probability)
