"""
ucb.py : Integrated upper confidence bound and its bounds over boxes.
"""
import numpy as np

from ..domain.space import CATEGORICAL


def integrated_ucb(ensemble, x, kappa=1.96):
    """
    Upper confidence bound averaged over the posterior states.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    x : 1d array (one point) or 2d array (M, D)
    kappa : float
        Exploration weight.

    Returns
    -------
    ucb : float or 1d array
        ``1/S sum_s (mu_s(x) + kappa sigma_s(x))`` on the standardized
        scale, sigma_s the latent standard deviation (no noise).
    """
    single = np.ndim(x) == 1
    total = 0.
    for state in ensemble.states:
        pred = state.predict(x)
        total = total + pred.mean + kappa * np.sqrt(pred.var)
    ucb = total / ensemble.S
    return float(ucb[0]) if single else ucb


def leaf_reachability(tree, box):
    """
    Leaves of `tree` whose cell intersects `box`.

    Parameters
    ----------
    tree : Tree
    box : Box
        Nonempty box over the tree's space.

    Returns
    -------
    leaves : set of int
        Leaf ids; all leaves for the full-domain box.
    """
    reach = set()

    def walk(node, path):
        if node.is_leaf:
            reach.add(tree.leaf_id(path))
            return
        if box.left_reachable(node.rule):
            walk(node.left, path + (0,))
        if box.right_reachable(node.rule):
            walk(node.right, path + (1,))

    walk(tree.root, ())
    return reach


def branching_rule(tree, box):
    """
    Shallowest rule of `tree` that sends part of `box` each way.

    Returns None when only one leaf of the tree is reachable.
    """
    node = tree.root
    while not node.is_leaf:
        left = box.left_reachable(node.rule)
        right = box.right_reachable(node.rule)
        if left and right:
            return node.rule
        node = node.left if left else node.right
    return None


class LeafTable(object):
    """
    Every leaf of every tree of every state of an ensemble, as flat arrays.

    Leaves of one tree are contiguous. A set of reachable leaves is a
    boolean mask over the table.

    Parameters
    ----------
    ensemble : PosteriorEnsemble

    Attributes
    ----------
    weight : 1d array
        Contribution of each leaf to the mixture mean,
        ``sigma0_sq / (m S) * (Phi_t^T alpha_s)[l]``.
    starts : 1d int array
        Offset of each flattened tree in the table.
    trees : list of Tree
        Flattened trees, state-major.
    """

    def __init__(self, ensemble):
        self.ensemble = ensemble
        self.space = ensemble.dataset.space
        S = ensemble.S
        self.trees = []
        tree_state = []
        weights = []
        phis = []
        for s, state in enumerate(ensemble.states):
            sums = state.leaf_sums()
            scale = state.sigma0_sq / (state.m * S)
            for t, tree in enumerate(state.forest):
                self.trees.append(tree)
                tree_state.append(s)
                weights.append(scale * sums[t])
                phis.append(state.phis[t])
        sizes = np.array([tree.n_leaves for tree in self.trees])
        self.starts = np.r_[0, np.cumsum(sizes)[:-1]]
        self.tree_state = np.array(tree_state)
        self.leaf_tree = np.repeat(np.arange(len(self.trees)), sizes)
        self.leaf_state = self.tree_state[self.leaf_tree]
        self.weight = np.concatenate(weights)
        self.n_leaves = self.weight.size

        D = self.space.D
        self.lo = np.empty((self.n_leaves, D))
        self.hi = np.empty((self.n_leaves, D))
        self.lo_open = np.zeros((self.n_leaves, D), dtype=bool)
        self.allowed = {}
        for j, f in enumerate(self.space.features):
            if f.kind == CATEGORICAL:
                self.allowed[j] = np.zeros((self.n_leaves, f.n_categories),
                                           dtype=bool)
        g = 0
        for tree in self.trees:
            for leaf in tree.leaves:
                self.lo[g] = leaf.box.lo
                self.hi[g] = leaf.box.hi
                self.lo_open[g] = leaf.box.lo_open
                for j in self.allowed:
                    self.allowed[j][g, list(leaf.box.allowed[j])] = True
                g += 1

        # Training membership of every leaf and the state selector
        self.phi = np.hstack(phis)
        self.state_onehot = np.zeros((self.n_leaves, S))
        self.state_onehot[np.arange(self.n_leaves), self.leaf_state] = 1.
        self.sigma0_sq = np.array([s.sigma0_sq for s in ensemble.states])
        self.noise = np.array([s.noise_var for s in ensemble.states])
        self.m = np.array([s.m for s in ensemble.states])

    def feature_mask(self, box, j):
        """Leaves whose cell intersects `box` along feature `j`."""
        if j in self.allowed:
            return self.allowed[j][:, sorted(box.allowed[j])].any(axis=1)
        Llo, Lopen = self.lo[:, j], self.lo_open[:, j]
        lo = np.maximum(Llo, box.lo[j])
        is_open = np.where(Llo > box.lo[j], Lopen,
                           np.where(Llo < box.lo[j], box.lo_open[j],
                                    Lopen | box.lo_open[j]))
        hi = np.minimum(self.hi[:, j], box.hi[j])
        return (lo < hi) | ((lo == hi) & ~is_open)

    def mask(self, box):
        """Leaves whose cell intersects `box`."""
        mask = np.ones(self.n_leaves, dtype=bool)
        for j in range(self.space.D):
            mask &= self.feature_mask(box, j)
        return mask

    def reach_counts(self, mask):
        return np.add.reduceat(mask.astype(int), self.starts)

    def tree_max(self, mask):
        return np.maximum.reduceat(np.where(mask, self.weight, -np.inf),
                                   self.starts)

    def tree_spread(self, mask):
        hi = self.tree_max(mask)
        lo = np.minimum.reduceat(np.where(mask, self.weight, np.inf),
                                 self.starts)
        return hi - lo

    def std_bound(self, mask, counts=None):
        """
        Upper bound of the latent standard deviation of each state on the
        box described by `mask`.

        Conditioning on one training point cannot give a smaller variance
        than conditioning on all of them, and the kernel to point n is at
        least ``sigma0_sq / m`` times the number of trees whose only
        reachable leaf contains it.
        """
        if counts is None:
            counts = self.reach_counts(mask)
        resolved = mask & (counts[self.leaf_tree] == 1)
        if self.phi.shape[0] == 0 or not resolved.any():
            return np.sqrt(self.sigma0_sq)
        shared = self.phi.dot(resolved[:, np.newaxis] * self.state_onehot)
        k_lb = shared * (self.sigma0_sq / self.m)[np.newaxis, :]
        var = self.sigma0_sq - (k_lb ** 2).max(axis=0) / (self.sigma0_sq +
                                                         self.noise)
        return np.sqrt(np.clip(var, 0., None))

    def bound(self, mask, kappa, counts=None):
        """Admissible upper bound of the integrated UCB on the box."""
        mean_part = self.tree_max(mask).sum()
        return mean_part + kappa * self.std_bound(mask, counts).mean()


def ucb_upper_bound(ensemble, box, kappa=1.96, table=None):
    """
    Upper bound of the integrated UCB over a box.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    box : Box
    kappa : float
    table : LeafTable, optional
        Precomputed leaf table of `ensemble`.

    Returns
    -------
    bound : float
        At least ``integrated_ucb(ensemble, x, kappa)`` for every x in the
        box. The mean part takes each tree's largest reachable leaf weight
        independently; the deviation part is bounded through the training
        points sharing a resolved leaf, or by sigma0.
    """
    table = table or LeafTable(ensemble)
    return float(table.bound(table.mask(box), kappa))
