"""
ensemble.py : Mixture-of-Gaussians predictive from sampled GP states.
"""
import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm

from ..forest import Forest
from .state import GpState, PredictiveGaussian


class PosteriorEnsemble(object):
    """
    Equally weighted mixture of posterior GP states.

    Parameters
    ----------
    states : list of GpState
        At least one state, all conditioned on `dataset`.
    dataset : Dataset
        Training data and standardization constants.
    """

    def __init__(self, states, dataset):
        states = list(states)
        if len(states) == 0:
            raise ValueError("A PosteriorEnsemble needs at least one state.")
        for s in states:
            if s.N != dataset.N or not np.array_equal(s.y, dataset.y):
                raise ValueError("Every state must be conditioned on the "
                                 "ensemble's dataset.")
        self.states = states
        self.dataset = dataset
        # Filled in by run_chains
        self.final_states = None
        self.chain_states = []
        self.diagnostics = None
        self.burn_in_sweeps = 0

    def __len__(self):
        return len(self.states)

    @property
    def S(self):
        return len(self.states)

    def components(self, Z):
        """
        Latent means, variances and noise of every component at `Z`.

        Returns
        -------
        means, vars : 2d arrays, (S, M)
            Standardized scale.
        noise : 1d array, length S
        """
        Z = np.atleast_2d(Z)
        preds = [s.predict(Z) for s in self.states]
        means = np.array([p.mean for p in preds])
        var = np.array([p.var for p in preds])
        noise = np.array([s.noise_var for s in self.states])
        return means, var, noise

    def predict(self, Z):
        """
        Mixture latent mean and variance at `Z`, standardized scale.
        """
        means, var, _ = self.components(Z)
        mean = means.mean(axis=0)
        total = (var + means ** 2).mean(axis=0) - mean ** 2
        return PredictiveGaussian(mean, np.maximum(total, 0.))

    def predict_raw(self, Z):
        """Mixture mean and latent variance on the raw output scale."""
        pred = self.predict(Z)
        return PredictiveGaussian(self.dataset.inverse(pred.mean),
                                  self.dataset.inverse_var(pred.var))

    def to_dict(self):
        return {'forests': [s.forest.to_dict() for s in self.states],
                'noise_vars': [s.noise_var for s in self.states],
                'y_mean': self.dataset.y_mean,
                'y_std': self.dataset.y_std,
                'sigma0_sq': self.states[0].sigma0_sq}

    @classmethod
    def from_dict(cls, spec, dataset):
        """
        Rebuild an ensemble, recomputing caches from `dataset`.

        Raises
        ------
        ValueError
            If the stored standardization constants do not match.
        """
        if not (np.isclose(spec['y_mean'], dataset.y_mean) and
                np.isclose(spec['y_std'], dataset.y_std)):
            raise ValueError("Ensemble was fitted with standardization "
                             "({0}, {1}), dataset has ({2}, {3}).".format(
                                 spec['y_mean'], spec['y_std'],
                                 dataset.y_mean, dataset.y_std))
        sigma0_sq = spec.get('sigma0_sq', 1.)
        states = [GpState(Forest.from_dict(f, dataset.space), noise,
                          dataset.X, dataset.y, sigma0_sq=sigma0_sq)
                  for f, noise in zip(spec['forests'], spec['noise_vars'])]
        return cls(states, dataset)


def mixture_nlpd(ensemble, x, y_true_raw):
    """
    Negative log predictive density of the mixture on the raw scale.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    x : 1d array (one point) or 2d array (M, D)
    y_true_raw : float or 1d array, length M
        Observed outputs, raw scale.

    Returns
    -------
    nlpd : float or 1d array
        ``-log(1/S sum_s N(y; mu_s, var_s + noise_s)) + log(y_std)`` with y
        standardized.

    Notes
    -----
    Component densities are combined with log-sum-exp.
    """
    single = np.ndim(x) == 1
    y = ensemble.dataset.transform(np.atleast_1d(y_true_raw))
    means, var, noise = ensemble.components(x)
    scale = np.sqrt(var + noise[:, np.newaxis])
    logp = norm.logpdf(y[np.newaxis, :], loc=means, scale=scale)
    nlpd = (-(logsumexp(logp, axis=0) - np.log(ensemble.S)) +
            np.log(ensemble.dataset.y_std))
    return float(nlpd[0]) if single else nlpd


def mixture_mse(ensemble, X, y_raw):
    """
    Mean squared error of the mixture mean on the raw scale.

    Parameters
    ----------
    ensemble : PosteriorEnsemble
    X : 2d array, (M, D)
        Test points.
    y_raw : 1d array, length M
        Test outputs, raw scale.

    Returns
    -------
    mse : float
    """
    X = np.atleast_2d(X)
    y_raw = np.asarray(y_raw, dtype=float).ravel()
    pred = ensemble.predict_raw(X).mean
    return float(np.mean((pred - y_raw) ** 2))
