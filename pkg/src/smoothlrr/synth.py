"""Synthetic union-of-subspaces data with ground truth.

Randomness comes from numpy's PCG64 generator.  A single integer seed is
expanded with :class:`numpy.random.SeedSequence` into four independent
child streams (bases, coefficients, corruption mask, noise), so changing
e.g. the noise level never changes the clean data.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParamsError

_STREAMS = ("bases", "coefficients", "mask", "noise")


def _streams(seed):
    children = np.random.SeedSequence(seed).spawn(len(_STREAMS))
    return {name: np.random.Generator(np.random.PCG64(s)) for name, s in zip(_STREAMS, children)}


def random_rotation(d: int, seed=None, rng=None) -> np.ndarray:
    """Haar-distributed ``d x d`` rotation (orthogonal, determinant +1)."""
    if int(d) < 1:
        raise InvalidParamsError("d must be >= 1")
    rng = np.random.default_rng(seed) if rng is None else rng
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    Q = Q * np.where(np.diag(R) < 0, -1.0, 1.0)
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_orthonormal(d: int, r: int, rng) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((d, r)))
    return Q * np.where(np.diag(R) < 0, -1.0, 1.0)


@dataclass
class SubspaceDataset:
    X: np.ndarray
    labels: np.ndarray
    corrupted: np.ndarray
    clean_X: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def effective_corruption(self) -> np.ndarray:
        """Indices of columns that actually differ from the clean data."""
        return np.flatnonzero(np.any(self.X != self.clean_X, axis=0))


def _column_noise(cols, noise_scale, noise_mode, rng):
    d = cols.shape[0]
    norms = np.linalg.norm(cols, axis=0)
    if noise_mode == "per_column":
        std = noise_scale * norms / np.sqrt(d)
    elif noise_mode == "per_entry":
        std = noise_scale * norms
    else:
        raise InvalidParamsError(f"unknown noise_mode {noise_mode!r}")
    return rng.standard_normal(cols.shape) * std[None, :]


def gen_subspaces(
    k: int = 15,
    r: int = 5,
    d: int = 200,
    n_i: int = 20,
    corruption_frac: float = 0.2,
    noise_scale: float = 0.1,
    seed=0,
    noise_mode: str = "per_column",
) -> SubspaceDataset:
    """Independent subspaces ``U_{i+1} = T U_i`` sampled as ``X_i = U_i Q_i``.

    A fraction ``corruption_frac`` of the columns receive additive Gaussian
    noise.  With ``noise_mode="per_column"`` (default) each entry of a
    corrupted column ``x`` has standard deviation
    ``noise_scale * ||x|| / sqrt(d)``, so the perturbation norm is about
    ``noise_scale * ||x||``; ``"per_entry"`` uses ``noise_scale * ||x||``
    for every entry instead.

    Labels are 0-based subspace indices.
    """
    k, r, d, n_i = int(k), int(r), int(d), int(n_i)
    if min(k, r, d, n_i) < 1:
        raise InvalidParamsError("k, r, d and n_i must be positive")
    if r > d:
        raise InvalidParamsError("subspace rank r exceeds ambient dimension d")
    if not 0.0 <= corruption_frac <= 1.0:
        raise InvalidParamsError("corruption_frac must lie in [0, 1]")
    if noise_scale < 0:
        raise InvalidParamsError("noise_scale must be nonnegative")
    if k * r > d:
        warnings.warn("k*r > d: subspaces cannot be independent", stacklevel=2)

    rngs = _streams(seed)
    T = random_rotation(d, rng=rngs["bases"])
    U = random_orthonormal(d, r, rngs["bases"])
    blocks = []
    for _ in range(k):
        blocks.append(U @ rngs["coefficients"].standard_normal((r, n_i)))
        U = T @ U
    clean = np.hstack(blocks)
    labels = np.repeat(np.arange(k), n_i)

    n = k * n_i
    n_bad = int(round(corruption_frac * n))
    idx = np.sort(rngs["mask"].choice(n, size=n_bad, replace=False))
    corrupted = np.zeros(n, dtype=bool)
    corrupted[idx] = True

    X = clean.copy()
    if noise_scale > 0 and n_bad:
        X[:, idx] += _column_noise(clean[:, idx], noise_scale, noise_mode, rngs["noise"])

    params = dict(
        k=k, r=r, d=d, n_i=n_i, corruption_frac=float(corruption_frac),
        noise_scale=float(noise_scale), noise_mode=noise_mode, seed=seed,
    )
    return SubspaceDataset(X, labels, corrupted, clean, params)


@dataclass
class RowCorruptedDataset:
    X: np.ndarray
    clean_X: np.ndarray
    corrupted_rows: np.ndarray
    params: dict = field(default_factory=dict)


def gen_row_corrupted(
    d: int = 40,
    n: int = 100,
    rank: int = 5,
    corruption_frac: float = 0.2,
    noise_scale: float = 1.0,
    seed=0,
) -> RowCorruptedDataset:
    """Low-rank ``d x n`` data with a fraction of rows (features) corrupted.

    Corrupted rows receive i.i.d. Gaussian noise whose standard deviation
    is ``noise_scale`` times the RMS entry of the clean matrix.
    """
    if min(d, n, rank) < 1 or rank > min(d, n):
        raise InvalidParamsError("need 1 <= rank <= min(d, n)")
    if not 0.0 <= corruption_frac <= 1.0:
        raise InvalidParamsError("corruption_frac must lie in [0, 1]")
    rngs = _streams(seed)
    U = random_orthonormal(d, rank, rngs["bases"])
    clean = U @ rngs["coefficients"].standard_normal((rank, n))
    n_bad = int(round(corruption_frac * d))
    rows = np.sort(rngs["mask"].choice(d, size=n_bad, replace=False))
    mask = np.zeros(d, dtype=bool)
    mask[rows] = True
    rms = np.sqrt(np.mean(clean * clean))
    X = clean.copy()
    X[rows] += noise_scale * rms * rngs["noise"].standard_normal((n_bad, n))
    params = dict(d=d, n=n, rank=rank, corruption_frac=corruption_frac,
                  noise_scale=noise_scale, seed=seed)
    return RowCorruptedDataset(X, clean, mask, params)
