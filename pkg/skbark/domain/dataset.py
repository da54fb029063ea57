"""
dataset.py : Observations with standardized outputs, CSV input and output.
"""
from warnings import warn

import numpy as np
import pandas as pd

from .space import CATEGORICAL


class Dataset(object):
    """
    Observed points with raw and standardized outputs.

    Parameters
    ----------
    space : FeatureSpace
        Space the points belong to.
    X : 2d array, (N, D)
        Observed points.
    y_raw : 1d array, length N
        Observed outputs on the original scale.

    Attributes
    ----------
    y_mean, y_std : float
        Standardization constants, ``y = (y_raw - y_mean) / y_std``.
    y : 1d array
        Standardized outputs.

    Notes
    -----
    The population standard deviation (divisor N) is used. When the outputs
    have zero spread, ``y_std`` is set to 1 and every standardized output
    is 0; with more than one observation this also issues a warning.

    An empty dataset is allowed as an intermediate value (for example
    sampling the prior); it has ``y_mean = 0`` and ``y_std = 1``.
    """

    def __init__(self, space, X, y_raw):
        self.space = space
        y_raw = np.asarray(y_raw, dtype=float).ravel()
        if y_raw.size == 0:
            X = np.zeros((0, space.D))
        else:
            X = space.check_points(X)
        if X.shape[0] != y_raw.size:
            raise ValueError("Got {0} points but {1} outputs.".format(
                X.shape[0], y_raw.size))
        if not np.all(np.isfinite(y_raw)):
            raise ValueError("Outputs must be finite.")
        self.X = X
        self.y_raw = y_raw

        if y_raw.size == 0:
            self.y_mean, self.y_std = 0., 1.
            self.y = y_raw.copy()
            return

        self.y_mean = float(y_raw.mean())
        std = float(y_raw.std())
        if std > 0:
            self.y_std = std
            self.y = (y_raw - self.y_mean) / self.y_std
        else:
            if y_raw.size > 1:
                warn("All {0} outputs equal {1}; standardized outputs are "
                     "all zero.".format(y_raw.size, self.y_mean))
            self.y_std = 1.
            self.y = np.zeros_like(y_raw)

    def __len__(self):
        return self.y.size

    @property
    def N(self):
        return self.y.size

    def inverse(self, y):
        """Map standardized outputs back to the raw scale."""
        return np.asarray(y) * self.y_std + self.y_mean

    def inverse_var(self, var):
        """Map standardized variances back to the raw scale."""
        return np.asarray(var) * self.y_std ** 2

    def transform(self, y_raw):
        """Standardize new raw outputs with this dataset's constants."""
        return (np.asarray(y_raw, dtype=float) - self.y_mean) / self.y_std

    def append(self, x, y_raw):
        """
        Return a new Dataset with extra observations; constants recomputed.
        """
        x = self.space.check_points(x)
        y_raw = np.atleast_1d(np.asarray(y_raw, dtype=float))
        return Dataset(self.space, np.vstack([self.X, x]),
                       np.concatenate([self.y_raw, y_raw]))

    def subset(self, idx):
        """Return the Dataset of the selected rows, restandardized."""
        idx = np.asarray(idx)
        return Dataset(self.space, self.X[idx], self.y_raw[idx])

    def to_frame(self, output='y'):
        """Return the raw data as a DataFrame with category labels."""
        frame = pd.DataFrame(
            [self.space.to_values(x) for x in self.X],
            columns=self.space.names)
        frame[output] = self.y_raw
        return frame

    def to_csv(self, path, output='y'):
        """Write the raw data to CSV, output as the final column."""
        self.to_frame(output).to_csv(path, index=False)


def standardize(space, X, y_raw):
    """
    Build a Dataset from points and raw outputs.

    Parameters
    ----------
    space : FeatureSpace
    X : 2d array, (N, D)
        At least one observation.
    y_raw : 1d array, length N

    Returns
    -------
    dataset : Dataset
        Carries ``y_mean`` and ``y_std``; use ``dataset.inverse`` to report
        on the raw scale.
    """
    if np.asarray(y_raw).size == 0:
        raise ValueError("standardize needs at least one observation.")
    return Dataset(space, X, y_raw)


def load_csv(path, space, output=None):
    """
    Load a Dataset from a CSV file.

    Parameters
    ----------
    path : string
        CSV with a header row naming the features.
    space : FeatureSpace
        Feature columns are looked up by feature name. Categorical columns
        hold the labels of their `Categorical` feature.
    output : string, optional
        Output column, never a feature column. Defaults to the final
        column of the file.

    Returns
    -------
    dataset : Dataset
    """
    frame = pd.read_csv(path)
    if output is None:
        output = frame.columns[-1]
    if output not in frame.columns:
        raise ValueError("Output column '{0}' not found in {1}.".format(
            output, path))
    if output in space.names:
        raise ValueError("Output column '{0}' is a feature of the space; "
                         "{1} has no separate output column.".format(
                             output, path))
    missing = [name for name in space.names if name not in frame.columns]
    if missing:
        raise ValueError("Feature columns {0} not found in {1}.".format(
            missing, path))

    X = np.empty((len(frame), space.D))
    for j, f in enumerate(space.features):
        col = frame[f.name]
        if f.kind == CATEGORICAL:
            X[:, j] = [f.index_of(v) for v in col]
        else:
            X[:, j] = col.to_numpy(dtype=float)
    return Dataset(space, X, frame[output].to_numpy(dtype=float))
