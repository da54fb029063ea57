"""
linalg.py : Jittered Cholesky factorization and low-rank inverse updates.
"""
import logging

import numpy as np
from scipy import linalg


logger = logging.getLogger(__name__)

JITTER_START = 1e-8
JITTER_MAX = 1e-4


class FactorizationError(np.linalg.LinAlgError):
    """Raised when a kernel matrix cannot be factorized even with jitter."""
    pass


def factorize(A):
    """
    Invert a symmetric positive-definite matrix through its Cholesky factor.

    On failure a jitter of 1e-8 is added to the diagonal and grown tenfold
    until 1e-4.

    Parameters
    ----------
    A : 2d array, (N, N)

    Returns
    -------
    A_inv : 2d array, (N, N)
    logdet : float
        Log-determinant of the (possibly jittered) matrix.
    jitter : float
        Diagonal jitter that was needed, 0 if none.

    Raises
    ------
    FactorizationError
        If the matrix is not positive definite even at the largest jitter.
    """
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0)), 0., 0.
    jitter = 0.
    while True:
        try:
            factor = linalg.cho_factor(A + jitter * np.eye(n), lower=True)
            break
        except linalg.LinAlgError:
            jitter = JITTER_START if jitter == 0 else jitter * 10
            if jitter > JITTER_MAX * 1.0001:
                raise FactorizationError(
                    "Kernel matrix not positive definite with jitter up to "
                    "{0}.".format(JITTER_MAX))
            logger.warning("Cholesky failed; retrying with jitter %g.",
                           jitter)
    A_inv = linalg.cho_solve(factor, np.eye(n))
    logdet = 2. * np.log(np.diag(factor[0])).sum()
    return A_inv, logdet, jitter


def woodbury_terms(A_inv, U, signs):
    """
    Pieces of the inverse of ``A + U diag(signs) U^T``.

    Parameters
    ----------
    A_inv : 2d array, (N, N)
        Inverse of a positive-definite matrix A.
    U : 2d array, (N, r)
    signs : 1d array of +1 / -1, length r

    Returns
    -------
    W : 2d array, (N, r)
        ``A_inv U``.
    G_inv : 2d array, (r, r)
        Inverse of the capacitance matrix ``diag(signs) + U^T A_inv U``.
    delta_logdet : float
        Change of log-determinant from A to the updated matrix.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the capacitance matrix is numerically singular or the updated
        matrix would not be positive definite.
    """
    signs = np.asarray(signs, dtype=float)
    W = A_inv.dot(U)
    G = np.diag(signs) + U.T.dot(W)
    G = 0.5 * (G + G.T)
    if np.linalg.cond(G) > 1e12:
        raise np.linalg.LinAlgError("Capacitance matrix is singular.")
    sign, logabs = np.linalg.slogdet(G)
    # det(A') = det(G) det(C) det(A) and both A, A' are positive definite
    n_down = int((signs < 0).sum())
    if sign * (-1) ** n_down <= 0:
        raise np.linalg.LinAlgError("Update leaves the matrix indefinite.")
    return W, np.linalg.inv(G), logabs


def woodbury_update(A_inv, U, signs):
    """
    Inverse and log-determinant change after a signed low-rank update.

    Sherman-Morrison-Woodbury together with the matrix determinant lemma.

    Parameters
    ----------
    A_inv : 2d array, (N, N)
    U : 2d array, (N, r)
    signs : 1d array of +1 / -1, length r
        +1 adds ``u u^T``, -1 subtracts it.

    Returns
    -------
    new_inv : 2d array, (N, N)
        Inverse of ``A + U diag(signs) U^T``.
    delta_logdet : float

    Examples
    --------
    >>> new_inv, dld = woodbury_update(np.eye(3), np.eye(3)[:, :1], [1])
    >>> np.diag(new_inv)
    array([0.5, 1. , 1. ])
    """
    W, G_inv, delta = woodbury_terms(A_inv, U, signs)
    return A_inv - W.dot(G_inv).dot(W.T), delta
