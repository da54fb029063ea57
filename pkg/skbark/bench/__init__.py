"""
Benchmark subpackage: synthetic objectives sampled from the tree prior or
taken from the standard test-function collections, held-out regression
scoring and regret reporting of optimization runs.

"""
__all__ = ['BENCHMARKS',
           'Benchmark',
           'RegressionScore',
           'ackley',
           'aggregate_regret',
           'depth_prior_sensitivity',
           'discrete_ackley',
           'discrete_rosenbrock',
           'forest_minimum',
           'hartmann6',
           'make_benchmark',
           'make_tree_function',
           'random_search_trace',
           'regression_eval',
           'regression_fit',
           'regret_report',
           'rosenbrock',
           'run_benchmark',
           'sample_count_sensitivity',
           'styblinski_tang',
           'summarize_results',
           'train_test_split',
           'tree_function',
           'tree_function_cat',
           ]

from .functions import (BENCHMARKS, Benchmark, ackley, discrete_ackley,
                        discrete_rosenbrock, forest_minimum, hartmann6,
                        make_benchmark, make_tree_function, rosenbrock,
                        styblinski_tang, tree_function, tree_function_cat)
from .evaluate import (RegressionScore, aggregate_regret,
                       depth_prior_sensitivity, random_search_trace,
                       regression_eval, regression_fit, regret_report,
                       run_benchmark, sample_count_sensitivity,
                       summarize_results, train_test_split)
