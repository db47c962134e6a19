"""Subspace segmentation from a representation matrix, and its scoring."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.cluster import KMeans

from .errors import InvalidParamsError, LengthMismatchError, NotSquareError, NotSymmetricError

DEGREE_FLOOR = 1e-12


def affinity_from_z(Z) -> np.ndarray:
    """Symmetric nonnegative affinity ``(|Z| + |Z^T|) / 2``."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise NotSquareError(f"Z must be square, got shape {Z.shape}")
    A = np.abs(Z)
    return 0.5 * (A + A.T)


def spectral_embedding(W, k: int) -> np.ndarray:
    """Row-normalised bottom-k eigenvectors of ``I - D^-1/2 W D^-1/2``.

    Zero-degree nodes get degree ``DEGREE_FLOOR`` so the normalisation
    stays finite.
    """
    deg = W.sum(axis=1)
    deg = np.where(deg > DEGREE_FLOOR, deg, DEGREE_FLOOR)
    s = 1.0 / np.sqrt(deg)
    Wn = s[:, None] * W * s[None, :]
    # bottom eigenvectors of L are the top eigenvectors of the normalised W
    _, V = np.linalg.eigh(0.5 * (Wn + Wn.T))
    U = V[:, ::-1][:, :k]
    norms = np.linalg.norm(U, axis=1, keepdims=True)
    return U / np.where(norms > 0, norms, 1.0)


def spectral_cluster(W, k: int, seed=0, n_init: int = 20) -> np.ndarray:
    """Normalised spectral clustering of an affinity matrix.

    Returns 0-based labels.  k-means uses k-means++ seeding with
    ``n_init`` restarts (best inertia kept), 300 iterations max and a
    tolerance of 1e-9.
    """
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise NotSquareError("affinity must be square")
    if not np.allclose(W, W.T, rtol=0, atol=1e-12 * max(1.0, np.abs(W).max())):
        raise NotSymmetricError("affinity must be symmetric")
    if (W < 0).any():
        raise InvalidParamsError("affinity must be nonnegative")
    k = int(k)
    n = W.shape[0]
    if not 1 <= k <= n:
        raise InvalidParamsError(f"k must lie in 1..{n}")
    if k == 1:
        return np.zeros(n, dtype=int)
    U = spectral_embedding(W, k)
    km = KMeans(n_clusters=k, init="k-means++", n_init=n_init, max_iter=300,
                tol=1e-9, random_state=seed)
    return km.fit_predict(U).astype(int)


def clustering_accuracy(pred, truth) -> float:
    """Best agreement rate over label matchings (Hungarian assignment)."""
    pred = np.asarray(pred).ravel()
    truth = np.asarray(truth).ravel()
    if pred.size != truth.size:
        raise LengthMismatchError(f"{pred.size} predictions for {truth.size} labels")
    if pred.size == 0:
        return 1.0
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    C = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(C, (pi, ti), 1)
    rows, cols = linear_sum_assignment(-C)
    return float(C[rows, cols].sum()) / pred.size


def segmentation_error(pred, truth) -> float:
    return 1.0 - clustering_accuracy(pred, truth)
