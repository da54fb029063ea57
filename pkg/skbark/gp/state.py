"""
state.py : One GP posterior state with cached factorization and MH updates.
"""
import logging
from collections import namedtuple

import numpy as np

from .kernel import cross, membership_blocks
from .linalg import factorize, woodbury_terms


logger = logging.getLogger(__name__)

LOG_2PI = np.log(2 * np.pi)

PredictiveGaussian = namedtuple('PredictiveGaussian', ['mean', 'var'])


class Candidate(object):
    """
    Proposed change to a GpState, applied only if the MH step accepts it.

    Attributes
    ----------
    kind : string
        'tree' (low-rank), 'full' (tree change refactorized), 'noise' or
        'identity'.
    delta : float
        Marginal log-likelihood of the proposed state minus the current one.
    """

    def __init__(self, kind, delta, mll, **payload):
        self.kind = kind
        self.delta = delta
        self.mll = mll
        self.payload = payload


def _cancel_columns(phi_old, phi_new):
    """
    Drop leaf columns present in both membership matrices.

    Identical columns contribute the same rank-one term to the kernel, so
    only the unmatched ones enter the update.
    """
    remaining = {}
    for k in range(phi_old.shape[1]):
        remaining.setdefault(phi_old[:, k].tobytes(), []).append(k)
    keep_new = []
    for k in range(phi_new.shape[1]):
        key = phi_new[:, k].tobytes()
        if remaining.get(key):
            remaining[key].pop()
        else:
            keep_new.append(k)
    keep_old = sorted(k for ks in remaining.values() for k in ks)
    return phi_new[:, keep_new], phi_old[:, keep_old]


class GpState(object):
    """
    Forest-kernel GP with noise, conditioned on standardized data.

    Parameters
    ----------
    forest : Forest
        Kernel hyperparameter.
    noise_var : float
        Observation noise variance, positive.
    X : 2d array, (N, D)
        Training points, N may be 0.
    y : 1d array, length N
        Standardized outputs.
    sigma0_sq : float, optional
        Kernel scale; fixed to 1 for standardized outputs.
    refresh_every : int, optional
        Accepted low-rank updates between full refactorizations.
    probe_tol : float, optional
        Largest tolerated residual ``max |K_noisy alpha - y|`` before an
        early refactorization.

    Attributes
    ----------
    phis : list of 2d arrays
        Leaf membership of the training points in each tree.
    K : 2d array
        Noise-free kernel matrix.
    K_inv : 2d array
        Inverse of ``K + noise_var I``.
    logdet : float
        Log-determinant of ``K + noise_var I``.
    alpha : 1d array
        ``K_inv y``.
    mll : float
        Marginal log-likelihood of y.
    """

    def __init__(self, forest, noise_var, X, y, sigma0_sq=1., refresh_every=50,
                 probe_tol=1e-6):
        if not noise_var > 0:
            raise ValueError("noise_var must be positive, got {0}.".format(
                noise_var))
        self.forest = forest
        self.noise_var = float(noise_var)
        self.X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.X.size == 0:
            self.X = np.zeros((0, forest.space.D))
        self.y = np.asarray(y, dtype=float).ravel()
        if self.X.shape[0] != self.y.size:
            raise ValueError("Got {0} points but {1} outputs.".format(
                self.X.shape[0], self.y.size))
        self.sigma0_sq = float(sigma0_sq)
        self.refresh_every = int(refresh_every)
        self.probe_tol = float(probe_tol)
        self.refresh()

    @property
    def N(self):
        return self.y.size

    @property
    def m(self):
        return self.forest.m

    def copy(self):
        """Independent state sharing only the immutable forest."""
        new = object.__new__(GpState)
        new.__dict__.update(self.__dict__)
        new.phis = list(self.phis)
        new.K = self.K.copy()
        new.K_inv = self.K_inv.copy()
        new.alpha = self.alpha.copy()
        return new

    def _mll(self, alpha, logdet):
        return (-0.5 * self.y.dot(alpha) - 0.5 * logdet -
                0.5 * self.N * LOG_2PI)

    def _scratch(self):
        forest, noise_var = self.forest, self.noise_var
        phis = membership_blocks(forest, self.X) if self.N else \
            [np.zeros((0, tree.n_leaves)) for tree in forest]
        K = np.zeros((self.N, self.N))
        for phi in phis:
            K += phi.dot(phi.T)
        K *= self.sigma0_sq / forest.m
        K_inv, logdet, _ = factorize(K + noise_var * np.eye(self.N))
        alpha = K_inv.dot(self.y)
        return phis, K, K_inv, logdet, alpha

    def refresh(self):
        """Recompute every cache from scratch."""
        (self.phis, self.K, self.K_inv, self.logdet,
         self.alpha) = self._scratch()
        self.mll = self._mll(self.alpha, self.logdet)
        self._since_refresh = 0
        self._leaf_sums = None

    def check(self):
        """
        Largest discrepancy between cached and from-scratch quantities.

        Returns
        -------
        errors : dict
            Absolute errors of 'mll', 'alpha' and 'logdet'.
        """
        _, _, _, logdet, alpha = self._scratch()
        mll = self._mll(alpha, logdet)
        return {'mll': abs(mll - self.mll),
                'alpha': float(np.max(np.abs(alpha - self.alpha),
                                      initial=0.)),
                'logdet': abs(logdet - self.logdet)}

    def propose_tree(self, t, new_tree):
        """
        Low-rank candidate for replacing tree `t`.

        The kernel changes by ``c (Phi*_t Phi*_t^T - Phi_t Phi_t^T)`` with
        ``c = sigma0_sq / m``; leaf columns shared by both trees cancel and
        the rest enter a Woodbury update of the inverse and a determinant
        lemma update of the log-determinant. A singular or indefinite
        capacitance matrix falls back to a full refactorization.

        Returns
        -------
        candidate : Candidate
        """
        phi_new = new_tree.membership(self.X) if self.N else \
            np.zeros((0, new_tree.n_leaves))
        up, down = _cancel_columns(self.phis[t], phi_new)
        r = up.shape[1] + down.shape[1]
        if r == 0 or self.N == 0:
            return Candidate('identity', 0., self.mll, t=t, tree=new_tree,
                             phi=phi_new)

        c = self.sigma0_sq / self.m
        U = np.sqrt(c) * np.hstack([up, down])
        signs = np.r_[np.ones(up.shape[1]), -np.ones(down.shape[1])]
        try:
            W, G_inv, delta_logdet = woodbury_terms(self.K_inv, U, signs)
        except np.linalg.LinAlgError:
            logger.warning("Low-rank update singular for tree %d; "
                           "refactorizing.", t)
            return self._full_tree_candidate(t, new_tree, phi_new, U, signs)

        Wy = W.T.dot(self.y)
        G_inv_Wy = G_inv.dot(Wy)
        alpha = self.alpha - W.dot(G_inv_Wy)
        logdet = self.logdet + delta_logdet
        mll = self._mll(alpha, logdet)
        return Candidate('tree', mll - self.mll, mll, t=t, tree=new_tree,
                         phi=phi_new, U=U, signs=signs, W=W, G_inv=G_inv,
                         alpha=alpha, logdet=logdet)

    def _full_tree_candidate(self, t, new_tree, phi_new, U, signs):
        K = self.K + (U * signs).dot(U.T)
        K_inv, logdet, _ = factorize(K + self.noise_var * np.eye(self.N))
        alpha = K_inv.dot(self.y)
        mll = self._mll(alpha, logdet)
        return Candidate('full', mll - self.mll, mll, t=t, tree=new_tree,
                         phi=phi_new, K=K, K_inv=K_inv, alpha=alpha,
                         logdet=logdet)

    def propose_noise(self, noise_var):
        """Candidate for a new noise variance, by full refactorization."""
        if not noise_var > 0:
            raise ValueError("noise_var must be positive, got {0}.".format(
                noise_var))
        if noise_var == self.noise_var:
            return Candidate('identity', 0., self.mll, noise_var=noise_var)
        K_inv, logdet, _ = factorize(self.K + noise_var * np.eye(self.N))
        alpha = K_inv.dot(self.y)
        mll = self._mll(alpha, logdet)
        return Candidate('noise', mll - self.mll, mll, noise_var=noise_var,
                         K_inv=K_inv, alpha=alpha, logdet=logdet)

    def accept(self, candidate):
        """Apply an accepted candidate in place."""
        p = candidate.payload
        if 'tree' in p:
            self.forest = self.forest.replace(p['t'], p['tree'])
            self.phis[p['t']] = p['phi']
        if 'noise_var' in p:
            self.noise_var = float(p['noise_var'])
        self._leaf_sums = None

        if candidate.kind == 'identity':
            return
        if candidate.kind == 'tree':
            U, W = p['U'], p['W']
            self.K += (U * p['signs']).dot(U.T)
            self.K_inv -= W.dot(p['G_inv']).dot(W.T)
        else:
            if candidate.kind == 'full':
                self.K = p['K']
            self.K_inv = p['K_inv']
        self.alpha = p['alpha']
        self.logdet = p['logdet']
        self.mll = candidate.mll

        if candidate.kind == 'tree':
            self._since_refresh += 1
            if self._since_refresh >= self.refresh_every:
                logger.debug("Periodic refactorization after %d updates.",
                             self._since_refresh)
                self.refresh()
            else:
                drift = self._probe()
                if drift > self.probe_tol:
                    logger.warning("Cached factorization drifted by %g; "
                                   "refactorizing.", drift)
                    self.refresh()
        else:
            self._since_refresh = 0

    def _probe(self):
        resid = self.K.dot(self.alpha) + self.noise_var * self.alpha - self.y
        return float(np.max(np.abs(resid), initial=0.))

    def leaf_sums(self):
        """
        Per-tree leaf weights ``c_t = Phi_t^T alpha``.

        The posterior mean at x is ``sigma0_sq / m * sum_t c_t[leaf_t(x)]``.
        """
        if self._leaf_sums is None:
            self._leaf_sums = [phi.T.dot(self.alpha) for phi in self.phis]
        return self._leaf_sums

    def predict(self, Z):
        """
        Posterior latent mean and variance at the rows of `Z`.

        Returns
        -------
        pred : PredictiveGaussian
            Arrays of length M; variance clamped to [0, sigma0_sq].
        """
        Z = self.forest.space.check_points(Z)
        if self.N == 0:
            return PredictiveGaussian(np.zeros(Z.shape[0]),
                                      np.full(Z.shape[0], self.sigma0_sq))
        k = cross(self.forest, self.sigma0_sq, Z, self.X)
        mean = k.dot(self.alpha)
        var = self.sigma0_sq - np.einsum('ij,ij->i', k.dot(self.K_inv), k)
        return PredictiveGaussian(mean, np.clip(var, 0., self.sigma0_sq))

    def predict_mean_by_leaf_sums(self, Z):
        """Posterior mean from the per-tree leaf weights."""
        Z = self.forest.space.check_points(Z)
        ids = self.forest.leaf_indices(Z)
        sums = self.leaf_sums()
        total = np.zeros(Z.shape[0])
        for t in range(self.m):
            total += sums[t][ids[:, t]]
        return self.sigma0_sq / self.m * total


def marginal_log_likelihood(state, y=None):
    """
    Marginal log-likelihood of standardized outputs under a GpState.

    Parameters
    ----------
    state : GpState
    y : 1d array, optional
        Outputs; defaults to the state's own, in which case the cached value
        is returned.

    Returns
    -------
    mll : float
        ``-1/2 y^T K_noisy^-1 y - 1/2 log|K_noisy| - N/2 log(2 pi)``.
    """
    if y is None:
        return state.mll
    y = np.asarray(y, dtype=float).ravel()
    if y.size != state.N:
        raise ValueError("Expected {0} outputs, got {1}.".format(
            state.N, y.size))
    return (-0.5 * y.dot(state.K_inv.dot(y)) - 0.5 * state.logdet -
            0.5 * state.N * LOG_2PI)


def update_tree_lowrank(state, t, new_tree):
    """
    Propose replacing tree `t` of a state.

    Returns
    -------
    candidate : Candidate
        Pass to ``state.accept`` to apply.
    delta : float
        Change of marginal log-likelihood.
    """
    candidate = state.propose_tree(t, new_tree)
    return candidate, candidate.delta


def update_noise(state, new_noise_var):
    """
    Propose a new noise variance for a state.

    Returns
    -------
    candidate : Candidate
    delta : float
    """
    candidate = state.propose_noise(new_noise_var)
    return candidate, candidate.delta


def predict(state, x):
    """
    Posterior latent mean and variance.

    Parameters
    ----------
    state : GpState
    x : 1d array (one point) or 2d array (M, D)

    Returns
    -------
    pred : PredictiveGaussian
        Floats for a single point, arrays otherwise.
    """
    single = np.ndim(x) == 1
    pred = state.predict(x)
    if single:
        return PredictiveGaussian(float(pred.mean[0]), float(pred.var[0]))
    return pred


def predict_mean_by_leaf_sums(state, x):
    """
    Posterior mean as a sum of per-tree leaf weights.

    Equal to ``predict(state, x).mean`` up to rounding.
    """
    single = np.ndim(x) == 1
    mean = state.predict_mean_by_leaf_sums(x)
    return float(mean[0]) if single else mean
