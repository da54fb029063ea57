"""
space.py : Mixed feature spaces, points and axis-aligned boxes.

A point is stored as a 1d float array of length D. Continuous features hold
their real value, integer features an integral value and categorical features
the category index. No one-hot encoding is used anywhere in the package.
"""
import numpy as np


CONTINUOUS = 'continuous'
INTEGER = 'integer'
CATEGORICAL = 'categorical'


class FeatureSpec(object):
    """
    Base class of a single feature description.

    Concrete features are `Continuous`, `Integer` and `Categorical`.
    """
    kind = None

    def __init__(self, name=None):
        self.name = name

    def __eq__(self, other):
        return (type(self) is type(other) and
                self.to_dict() == other.to_dict())

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(repr(sorted(self.to_dict().items())))


class Continuous(FeatureSpec):
    """
    Real-valued feature on the closed interval [lo, hi].

    Parameters
    ----------
    lo, hi : float
        Bounds of the feature, lo < hi.
    name : string, optional
        Column name used in dataset files.
    """
    kind = CONTINUOUS

    def __init__(self, lo, hi, name=None):
        super(Continuous, self).__init__(name)
        lo, hi = float(lo), float(hi)
        if not lo < hi:
            raise ValueError("Continuous feature requires lo < hi, "
                             "got [{0}, {1}].".format(lo, hi))
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return "Continuous({0}, {1})".format(self.lo, self.hi)

    def to_dict(self):
        return {'type': self.kind, 'name': self.name,
                'lo': self.lo, 'hi': self.hi}


class Integer(FeatureSpec):
    """
    Ordinal integer feature taking the values lo, lo + 1, ..., hi.

    Integer features are split like numeric features, with thresholds at
    half-integers, and are reported as Python ints.
    """
    kind = INTEGER

    def __init__(self, lo, hi, name=None):
        super(Integer, self).__init__(name)
        if int(lo) != lo or int(hi) != hi:
            raise ValueError("Integer feature bounds must be integral, "
                             "got [{0}, {1}].".format(lo, hi))
        lo, hi = int(lo), int(hi)
        if not lo < hi:
            raise ValueError("Integer feature requires lo < hi, "
                             "got [{0}, {1}].".format(lo, hi))
        self.lo = lo
        self.hi = hi

    def __repr__(self):
        return "Integer({0}, {1})".format(self.lo, self.hi)

    def to_dict(self):
        return {'type': self.kind, 'name': self.name,
                'lo': self.lo, 'hi': self.hi}


class Categorical(FeatureSpec):
    """
    Unordered feature with `n_categories` values, indexed 0 .. n - 1.

    Parameters
    ----------
    n_categories : int
        Number of categories, at least 2.
    labels : list of string, optional
        Labels of the categories as they appear in dataset files. Defaults
        to the string form of each index.
    name : string, optional
        Column name used in dataset files.
    """
    kind = CATEGORICAL

    def __init__(self, n_categories, labels=None, name=None):
        super(Categorical, self).__init__(name)
        if labels is not None:
            labels = [str(label) for label in labels]
            if n_categories is None:
                n_categories = len(labels)
            if len(labels) != n_categories:
                raise ValueError("Expected {0} labels, got {1}.".format(
                    n_categories, len(labels)))
            if len(set(labels)) != len(labels):
                raise ValueError("Category labels must be unique.")
        n_categories = int(n_categories)
        if n_categories < 2:
            raise ValueError("Categorical feature needs at least 2 "
                             "categories, got {0}.".format(n_categories))
        self.n_categories = n_categories
        if labels is None:
            labels = [str(i) for i in range(n_categories)]
        self.labels = labels
        self.lo = 0
        self.hi = n_categories - 1

    def __repr__(self):
        return "Categorical({0})".format(self.n_categories)

    def index_of(self, label):
        """Return the category index of a dataset label."""
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ValueError("Unknown category '{0}'; expected one of "
                             "{1}.".format(label, self.labels))

    def to_dict(self):
        return {'type': self.kind, 'name': self.name,
                'n_categories': self.n_categories, 'labels': self.labels}


_FEATURE_TYPES = {CONTINUOUS: Continuous,
                  INTEGER: Integer,
                  CATEGORICAL: Categorical}


def feature_from_dict(spec):
    """
    Build a FeatureSpec from its JSON description.

    Parameters
    ----------
    spec : dict
        One of ``{'type': 'continuous', 'lo': .., 'hi': ..}``,
        ``{'type': 'integer', 'lo': .., 'hi': ..}`` or
        ``{'type': 'categorical', 'n_categories': .. | 'labels': [..]}``,
        each with an optional ``'name'``.

    Returns
    -------
    feature : FeatureSpec
    """
    spec = dict(spec)
    kind = spec.pop('type', None)
    if kind not in _FEATURE_TYPES:
        raise ValueError("Unknown feature type '{0}'; expected one of "
                         "{1}.".format(kind, sorted(_FEATURE_TYPES)))
    name = spec.pop('name', None)
    if kind == CATEGORICAL:
        allowed = {'n_categories', 'labels'}
    else:
        allowed = {'lo', 'hi'}
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError("Unknown keys {0} for a {1} feature.".format(
            sorted(unknown), kind))
    if kind == CATEGORICAL:
        return Categorical(spec.get('n_categories'), spec.get('labels'),
                           name=name)
    try:
        return _FEATURE_TYPES[kind](spec['lo'], spec['hi'], name=name)
    except KeyError as err:
        raise ValueError("Missing key {0} for a {1} feature.".format(
            err, kind))


class FeatureSpace(object):
    """
    Ordered collection of mixed features.

    Parameters
    ----------
    features : iterable of FeatureSpec
        At least one feature.

    Notes
    -----
    Inputs are never rescaled; the uniform split prior is defined on the raw
    bounds of each feature.
    """

    def __init__(self, features):
        features = list(features)
        if len(features) == 0:
            raise ValueError("A FeatureSpace needs at least one feature.")
        for f in features:
            if not isinstance(f, FeatureSpec):
                raise ValueError("Expected FeatureSpec, got {0!r}.".format(f))
        self.features = features
        for i, f in enumerate(self.features):
            if f.name is None:
                f.name = 'x{0}'.format(i)
        self.kinds = [f.kind for f in features]
        self.lo = np.array([f.lo for f in features], dtype=float)
        self.hi = np.array([f.hi for f in features], dtype=float)

    def __len__(self):
        return len(self.features)

    def __iter__(self):
        return iter(self.features)

    def __getitem__(self, key):
        return self.features[key]

    def __eq__(self, other):
        return (isinstance(other, FeatureSpace) and
                self.features == other.features)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return "FeatureSpace({0})".format(self.features)

    @property
    def D(self):
        """Number of features."""
        return len(self.features)

    @property
    def names(self):
        return [f.name for f in self.features]

    def full_box(self):
        """Return the Box covering the whole space."""
        allowed = [frozenset(range(f.n_categories))
                   if f.kind == CATEGORICAL else None
                   for f in self.features]
        return Box(self, self.lo.copy(), self.hi.copy(),
                   np.zeros(self.D, dtype=bool), allowed)

    def check_points(self, X):
        """
        Validate one point or an (N, D) array of points.

        Returns
        -------
        X : 2d array, (N, D)
            Points as floats.

        Raises
        ------
        ValueError
            On dimension mismatch or any coordinate outside its feature.
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.D:
            raise ValueError("Points have {0} coordinates, space has "
                             "{1}.".format(X.shape[1], self.D))
        if not np.all(np.isfinite(X)):
            raise ValueError("Points contain non-finite coordinates.")
        outside = (X < self.lo) | (X > self.hi)
        for j, kind in enumerate(self.kinds):
            if kind != CONTINUOUS:
                outside[:, j] |= X[:, j] != np.round(X[:, j])
        if outside.any():
            row, col = np.argwhere(outside)[0]
            raise ValueError("Coordinate {0} = {1} of point {2} lies outside "
                             "{3!r}.".format(col, X[row, col], row,
                                             self.features[col]))
        return X

    def to_values(self, x):
        """
        Convert a point to a tagged per-feature value list.

        Continuous values are floats, integers are ints and categorical
        values are their labels.
        """
        x = np.asarray(x, dtype=float).ravel()
        values = []
        for f, v in zip(self.features, x):
            if f.kind == CONTINUOUS:
                values.append(float(v))
            elif f.kind == INTEGER:
                values.append(int(round(v)))
            else:
                values.append(f.labels[int(round(v))])
        return values

    def from_values(self, values):
        """Inverse of `to_values`; accepts labels or category indices."""
        values = list(values)
        if len(values) != self.D:
            raise ValueError("Expected {0} values, got {1}.".format(
                self.D, len(values)))
        x = np.empty(self.D)
        for j, (f, v) in enumerate(zip(self.features, values)):
            if f.kind == CATEGORICAL and isinstance(v, str):
                x[j] = f.index_of(v)
            else:
                x[j] = float(v)
        return self.check_points(x)[0]

    def to_dict(self):
        return {'features': [f.to_dict() for f in self.features]}

    @classmethod
    def from_dict(cls, spec):
        if isinstance(spec, dict):
            unknown = set(spec) - {'features'}
            if unknown:
                raise ValueError("Unknown space keys {0}.".format(
                    sorted(unknown)))
            spec = spec.get('features', [])
        return cls([feature_from_dict(f) for f in spec])


class Box(object):
    """
    Axis-aligned subdomain of a FeatureSpace.

    Numeric features are restricted to an interval. Continuous lower bounds
    may be open, since a numeric rule sends ``x <= t`` left and the right
    child therefore owns ``(t, hi]``. Integer bounds are always closed and
    integral. Categorical features are restricted to a set of allowed
    category indices.

    Parameters
    ----------
    space : FeatureSpace
    lo, hi : 1d arrays, length D
        Numeric bounds; ignored for categorical features.
    lo_open : 1d bool array, length D
        True where the lower bound is excluded.
    allowed : list of frozenset or None
        Allowed categories per feature; None for numeric features.
    """

    def __init__(self, space, lo, hi, lo_open, allowed):
        self.space = space
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        self.lo_open = np.asarray(lo_open, dtype=bool)
        self.allowed = list(allowed)

    def copy(self):
        return Box(self.space, self.lo.copy(), self.hi.copy(),
                   self.lo_open.copy(), list(self.allowed))

    def __repr__(self):
        parts = []
        for j, kind in enumerate(self.space.kinds):
            if kind == CATEGORICAL:
                parts.append(str(sorted(self.allowed[j])))
            else:
                parts.append("{0}{1}, {2}]".format(
                    '(' if self.lo_open[j] else '[', self.lo[j], self.hi[j]))
        return "Box({0})".format(', '.join(parts))

    def __eq__(self, other):
        return (isinstance(other, Box) and
                np.array_equal(self.lo, other.lo) and
                np.array_equal(self.hi, other.hi) and
                np.array_equal(self.lo_open, other.lo_open) and
                self.allowed == other.allowed)

    def __ne__(self, other):
        return not self.__eq__(other)

    def is_empty(self):
        """True if no point of the space lies in the box."""
        for j, kind in enumerate(self.space.kinds):
            if kind == CATEGORICAL:
                if len(self.allowed[j]) == 0:
                    return True
            elif self.lo[j] > self.hi[j]:
                return True
            elif self.lo[j] == self.hi[j] and self.lo_open[j]:
                return True
        return False

    def is_splittable(self, j):
        """True if a rule on feature `j` can leave both children nonempty."""
        kind = self.space.kinds[j]
        if kind == CATEGORICAL:
            return len(self.allowed[j]) >= 2
        if kind == INTEGER:
            return self.hi[j] - self.lo[j] >= 1
        return self.hi[j] > self.lo[j]

    def splittable_features(self):
        return [j for j in range(self.space.D) if self.is_splittable(j)]

    def contains(self, X):
        """
        Vectorized membership test.

        Parameters
        ----------
        X : 2d array, (N, D)

        Returns
        -------
        inside : 1d bool array, length N
        """
        X = np.atleast_2d(X)
        if X.shape[1] != self.space.D:
            raise ValueError("Points have {0} coordinates, box has "
                             "{1}.".format(X.shape[1], self.space.D))
        inside = np.ones(X.shape[0], dtype=bool)
        for j, kind in enumerate(self.space.kinds):
            col = X[:, j]
            if kind == CATEGORICAL:
                inside &= np.isin(col, list(self.allowed[j]))
            else:
                if self.lo_open[j]:
                    inside &= col > self.lo[j]
                else:
                    inside &= col >= self.lo[j]
                inside &= col <= self.hi[j]
        return inside

    def splits_properly(self, rule):
        """
        True if `rule` leaves both children of the box with positive volume.

        Numeric thresholds must lie strictly inside the interval; categorical
        left sets must keep at least one allowed category on each side.
        """
        j = rule.feature
        if rule.is_categorical:
            return (len(self.allowed[j] & rule.left_set) > 0 and
                    len(self.allowed[j] - rule.left_set) > 0)
        return self.lo[j] < rule.threshold < self.hi[j]

    def left_reachable(self, rule):
        """True if some point of the box is routed left by `rule`."""
        j = rule.feature
        if rule.is_categorical:
            return len(self.allowed[j] & rule.left_set) > 0
        t = rule.threshold
        return self.lo[j] < t or (self.lo[j] == t and not self.lo_open[j])

    def right_reachable(self, rule):
        """True if some point of the box is routed right by `rule`."""
        j = rule.feature
        if rule.is_categorical:
            return len(self.allowed[j] - rule.left_set) > 0
        return self.hi[j] > rule.threshold

    def restrict(self, rule, go_left):
        """
        Return the part of the box routed to one side of `rule`.

        The result may be empty; check with `is_empty`.
        """
        box = self.copy()
        j = rule.feature
        kind = self.space.kinds[j]
        if rule.is_categorical:
            if go_left:
                box.allowed[j] = self.allowed[j] & rule.left_set
            else:
                box.allowed[j] = self.allowed[j] - rule.left_set
        elif kind == INTEGER:
            if go_left:
                box.hi[j] = min(self.hi[j], np.floor(rule.threshold))
            else:
                box.lo[j] = max(self.lo[j], np.ceil(rule.threshold))
        else:
            if go_left:
                box.hi[j] = min(self.hi[j], rule.threshold)
            elif rule.threshold >= self.lo[j]:
                box.lo[j] = rule.threshold
                box.lo_open[j] = True
        return box

    def split(self, rule):
        """Return the (left, right) children of the box under `rule`."""
        return self.restrict(rule, True), self.restrict(rule, False)

    def intersect(self, other):
        """Intersection with another box of the same space."""
        box = self.copy()
        for j, kind in enumerate(self.space.kinds):
            if kind == CATEGORICAL:
                box.allowed[j] = self.allowed[j] & other.allowed[j]
                continue
            if other.lo[j] > self.lo[j]:
                box.lo[j] = other.lo[j]
                box.lo_open[j] = other.lo_open[j]
            elif other.lo[j] == self.lo[j]:
                box.lo_open[j] = self.lo_open[j] or other.lo_open[j]
            box.hi[j] = min(self.hi[j], other.hi[j])
        return box

    def issubset(self, other):
        """True if every point of this (nonempty) box lies in `other`."""
        for j, kind in enumerate(self.space.kinds):
            if kind == CATEGORICAL:
                if not self.allowed[j] <= other.allowed[j]:
                    return False
                continue
            if self.hi[j] > other.hi[j] or self.lo[j] < other.lo[j]:
                return False
            if (self.lo[j] == other.lo[j] and other.lo_open[j] and
                    not self.lo_open[j]):
                return False
        return True

    def representative(self):
        """
        A deterministic interior point of a nonempty box.

        Continuous features take the interval midpoint, integer features the
        lower median value and categorical features the smallest allowed
        index.
        """
        x = np.empty(self.space.D)
        for j, kind in enumerate(self.space.kinds):
            if kind == CATEGORICAL:
                x[j] = min(self.allowed[j])
            elif kind == INTEGER:
                x[j] = np.floor(0.5 * (self.lo[j] + self.hi[j]))
            else:
                x[j] = 0.5 * (self.lo[j] + self.hi[j])
        return x


def box_contains(box, x):
    """
    Test whether a single point lies in a box.

    Parameters
    ----------
    box : Box
    x : 1d array, length D

    Returns
    -------
    inside : bool

    Raises
    ------
    ValueError
        If `x` does not have one coordinate per feature.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != box.space.D:
        raise ValueError("Point has shape {0}, box has {1} "
                         "features.".format(x.shape, box.space.D))
    return bool(box.contains(x[np.newaxis, :])[0])


def sample_uniform(space, n, rng):
    """
    Draw points uniformly from a mixed feature space.

    Parameters
    ----------
    space : FeatureSpace
    n : int
        Number of points, at least 1.
    rng : numpy.random.Generator

    Returns
    -------
    X : 2d array, (n, D)
        Continuous coordinates uniform on [lo, hi]; integer and categorical
        coordinates uniform over their values.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1, got {0}.".format(n))
    X = np.empty((n, space.D))
    for j, f in enumerate(space.features):
        if f.kind == CONTINUOUS:
            X[:, j] = rng.uniform(f.lo, f.hi, size=n)
        else:
            X[:, j] = rng.integers(f.lo, f.hi + 1, size=n)
    return X
