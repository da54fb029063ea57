"""
Feature domain subpackage: mixed continuous/integer/categorical feature
spaces, axis-aligned boxes over them and standardized datasets.

"""
__all__ = ['Box',
           'Categorical',
           'Continuous',
           'Dataset',
           'FeatureSpace',
           'FeatureSpec',
           'Integer',
           'box_contains',
           'feature_from_dict',
           'load_csv',
           'sample_uniform',
           'standardize',
           ]

from .space import (Box, Categorical, Continuous, FeatureSpace, FeatureSpec,
                    Integer, box_contains, feature_from_dict, sample_uniform)
from .dataset import Dataset, load_csv, standardize
