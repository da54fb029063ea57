"""
ratios.py : Noise prior and the Metropolis-Hastings ratios of every move.
"""
import numpy as np
from scipy import optimize, special, stats

from ..forest import MAX_DEPTH, split_probability


def softplus(theta):
    """``log(1 + exp(theta))``, evaluated without overflow."""
    return np.logaddexp(0., theta)


def softplus_inv(s):
    """Inverse of `softplus` for s > 0, ``log(exp(s) - 1)``."""
    s = np.asarray(s, dtype=float)
    return s + np.log(-np.expm1(-s))


class NoisePrior(object):
    """
    Inverse-gamma prior on the noise variance of standardized outputs.

    The prior is ``InvGamma(nu / 2, nu * t / 2)`` with t chosen so that
    ``Pr(noise_var < 1) = q``.

    Parameters
    ----------
    nu : float
        Degrees of freedom, positive.
    q : float
        Prior probability of a noise variance below the output variance.
    """

    def __init__(self, nu=3., q=0.9):
        self.nu = float(nu)
        self.q = float(q)
        self.t = solve_noise_scale(nu, q)
        self.a = 0.5 * self.nu
        self.scale = 0.5 * self.nu * self.t
        self.dist = stats.invgamma(self.a, scale=self.scale)

    def __repr__(self):
        return "NoisePrior(nu={0}, q={1}, t={2:.6g})".format(
            self.nu, self.q, self.t)

    def logpdf(self, noise_var):
        return self.dist.logpdf(noise_var)

    def cdf(self, noise_var):
        return self.dist.cdf(noise_var)

    def median(self):
        return float(self.dist.median())

    def mode(self):
        return self.scale / (self.a + 1)

    def sample(self, rng, size=None):
        return self.dist.rvs(size=size, random_state=rng)


def _prob_below_one(t, nu):
    # Pr(X < 1) for X ~ InvGamma(nu/2, nu t/2) is Q(nu/2, nu t/2)
    return special.gammaincc(0.5 * nu, 0.5 * nu * t)


def solve_noise_scale(nu, q):
    """
    Scale t of the noise prior so that ``Pr(noise_var < 1) = q``.

    Parameters
    ----------
    nu : float
        Positive degrees of freedom.
    q : float
        Target probability, in (0, 1).

    Returns
    -------
    t : float

    Raises
    ------
    ValueError
        On parameters out of range.
    RuntimeError
        If bisection does not reach ``|Pr - q| < 1e-10`` in 200 iterations.
    """
    if not nu > 0:
        raise ValueError("nu must be positive, got {0}.".format(nu))
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1), got {0}.".format(q))

    def f(t):
        return _prob_below_one(t, nu) - q

    # Pr decreases in t, from 1 at t -> 0
    lo, hi = 0., 1.
    while f(hi) > 0:
        lo, hi = hi, 2 * hi
        if hi > 1e300:
            raise RuntimeError("Could not bracket the noise scale for "
                               "nu={0}, q={1}.".format(nu, q))
    t, info = optimize.bisect(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(
        float).eps, maxiter=200, full_output=True, disp=False)
    if abs(f(t)) >= 1e-10:
        raise RuntimeError("Noise scale solve did not converge: "
                           "|Pr - q| = {0} after {1} iterations.".format(
                               abs(f(t)), info.iterations))
    return t


def _log_expm1(s):
    return s + np.log(-np.expm1(-s))


def noise_log_transition_ratio(old, new, noise_walk_sd=0.5):
    """
    Log proposal ratio ``log q(new -> old) - log q(old -> new)``.

    The proposal walks ``theta = softplus_inv(noise_var)`` with Gaussian
    steps of scale `noise_walk_sd`. By change of variables the proposal
    density of ``s = softplus(theta)`` is
    ``N(softplus_inv(s); theta, sd^2) / (1 - exp(-s))``. The Gaussian
    factor is symmetric in old and new and cancels, so only the Jacobian
    ``1 / (1 - exp(-s))`` of the softplus inverse is left:

        log(1 - exp(-new)) - log(1 - exp(-old))
        = old - new + log(expm1(new)) - log(expm1(old)).

    Closed forms that scale the ``log(expm1(new) / expm1(old))`` term by a
    factor depending on the step size are not a proposal ratio of this
    walk, and the step size does not enter here.

    Parameters
    ----------
    old, new : float
        Current and proposed noise variance, positive.
    noise_walk_sd : float
        Step size of the walk; the ratio does not depend on it.

    Returns
    -------
    log_ratio : float
        ``old - new + log(expm1(new)) - log(expm1(old))``.
    """
    if not (old > 0 and new > 0):
        raise ValueError("Noise variances must be positive, got {0} and "
                         "{1}.".format(old, new))
    return float(old - new + _log_expm1(new) - _log_expm1(old))


def noise_log_prior_ratio(old, new, prior):
    """
    Log ratio of the inverse-gamma prior densities at `new` and `old`.
    """
    if not (old > 0 and new > 0):
        raise ValueError("Noise variances must be positive, got {0} and "
                         "{1}.".format(old, new))
    return float(prior.logpdf(new) - prior.logpdf(old))


def _split_prob(box, depth, alpha, beta):
    # Boxes that cannot be split and nodes at the depth cap are leaves
    if depth >= MAX_DEPTH or not box.splittable_features():
        return 0.
    return split_probability(depth, alpha, beta)


def grow_ratios(tree, leaf, rule, alpha, beta):
    """
    Structural log ratios of growing `leaf` with `rule`.

    Parameters
    ----------
    tree : Tree
        Current tree.
    leaf : LeafInfo
        Target leaf, with a splittable box.
    rule : SplitRule
        Rule drawn for the leaf.
    alpha, beta : float
        Depth prior.

    Returns
    -------
    log_transition : float
        ``log(w0 / w1*)``, w0 the current leaf count and w1* the number of
        singly-internal nodes after the grow.
    log_prior : float
        ``log p_d - log(1 - p_d) + log(1 - p_l) + log(1 - p_r)``, p the
        split probabilities of the leaf and its two new children.

    Notes
    -----
    The probability of the rule appears in both the proposal and the prior
    and cancels. On continuous features the sum reduces to
    ``log(w0/w1*) + log(alpha) + 2 log(1 - alpha/(2+d)^beta)
    - log((1+d)^beta - alpha)``.
    """
    d = leaf.depth
    p = _split_prob(leaf.box, d, alpha, beta)
    if p == 0:
        raise ValueError("Leaf at {0} cannot be grown.".format(leaf.path))

    w0 = tree.n_leaves
    w1 = len(tree.singly_internal())
    if len(leaf.path) == 0:
        sibling_is_leaf = False
    else:
        sibling = leaf.path[:-1] + (1 - leaf.path[-1],)
        sibling_is_leaf = tree.node_at(sibling).is_leaf
    # The parent stops being singly-internal when its other child was a leaf
    w1_new = w1 + 1 - int(sibling_is_leaf)

    left, right = leaf.box.split(rule)
    log_prior = (np.log(p) - np.log1p(-p) +
                 np.log1p(-_split_prob(left, d + 1, alpha, beta)) +
                 np.log1p(-_split_prob(right, d + 1, alpha, beta)))
    return float(np.log(w0) - np.log(w1_new)), float(log_prior)


def prune_ratios(tree, node, alpha, beta):
    """
    Structural log ratios of pruning a singly-internal `node`.

    Exactly the negation of `grow_ratios` for the reverse grow.

    Parameters
    ----------
    tree : Tree
    node : DecisionInfo
        Singly-internal node of `tree`.

    Returns
    -------
    log_transition, log_prior : float
    """
    if not node.singly_internal:
        raise ValueError("Node at {0} is not singly-internal.".format(
            node.path))
    pruned = tree.prune(node.path)
    leaf = pruned.leaves[pruned.leaf_id(node.path)]
    log_transition, log_prior = grow_ratios(pruned, leaf, node.rule, alpha,
                                            beta)
    return -log_transition, -log_prior


def change_ratios(tree, node, rule, alpha=0.95, beta=2.):
    """
    Structural log ratios of changing the rule of a singly-internal node.

    Parameters
    ----------
    tree : Tree
    node : DecisionInfo
        Singly-internal node of `tree`.
    rule : SplitRule
        New rule, drawn from the node's own box.
    alpha, beta : float
        Depth prior.

    Returns
    -------
    log_transition : float
        Always 0: the rule is redrawn from the same box and the count of
        singly-internal nodes does not change.
    log_prior : float
        ``sum log(1 - p)`` over the new children minus the same sum over
        the old children.

    Notes
    -----
    The rule probability cancels between proposal and prior. What remains
    is whether each child can still be split: on integer and categorical
    features a rule may leave a child with a single value. On continuous
    features both sums agree and the ratio is 0.
    """
    if not node.singly_internal:
        raise ValueError("Node at {0} is not singly-internal.".format(
            node.path))
    d = node.depth + 1

    def leaf_terms(r):
        return sum(np.log1p(-_split_prob(child, d, alpha, beta))
                   for child in node.box.split(r))

    return 0., float(leaf_terms(rule) - leaf_terms(node.rule))
