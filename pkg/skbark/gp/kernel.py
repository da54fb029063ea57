"""
kernel.py : Forest kernel, counting the trees in which two points share a leaf.
"""
import numpy as np


def membership_blocks(forest, X):
    """
    Per-tree one-hot leaf membership matrices.

    Parameters
    ----------
    forest : Forest
    X : 2d array, (N, D)

    Returns
    -------
    phis : list of 2d arrays
        ``phis[t]`` has shape (N, L_t).
    """
    X = np.atleast_2d(X)
    return [tree.membership(X) for tree in forest]


def kernel(forest, sigma0_sq, x, x2):
    """
    Forest kernel between two points.

    Parameters
    ----------
    forest : Forest
    sigma0_sq : float
        Kernel scale.
    x, x2 : 1d arrays, length D
        Points inside the forest's domain.

    Returns
    -------
    k : float
        ``sigma0_sq`` times the fraction of trees placing both points in the
        same leaf.
    """
    X = forest.space.check_points(np.vstack([np.ravel(x), np.ravel(x2)]))
    ids = forest.leaf_indices(X)
    return sigma0_sq * np.mean(ids[0] == ids[1])


def cross(forest, sigma0_sq, X, Z):
    """
    Kernel matrix between two point sets, shape (len(X), len(Z)).
    """
    X = np.atleast_2d(X)
    Z = np.atleast_2d(Z)
    ids_x = forest.leaf_indices(X)
    ids_z = forest.leaf_indices(Z)
    agree = np.zeros((X.shape[0], Z.shape[0]))
    for t in range(forest.m):
        agree += ids_x[:, t, np.newaxis] == ids_z[np.newaxis, :, t]
    return sigma0_sq / forest.m * agree


def gram(forest, sigma0_sq, X):
    """
    Forest kernel matrix of a design.

    Parameters
    ----------
    forest : Forest
    sigma0_sq : float
    X : 2d array, (N, D)
        At least one point.

    Returns
    -------
    K : 2d array, (N, N)
        Symmetric positive semi-definite with ``sigma0_sq`` on the diagonal.

    Notes
    -----
    ``K = sigma0_sq / m * sum_t Phi_t Phi_t^T`` with `Phi_t` the leaf
    membership of tree t.
    """
    X = forest.space.check_points(X)
    phi = np.hstack(membership_blocks(forest, X))
    return sigma0_sq / forest.m * phi.dot(phi.T)
