"""Exact and smoothed sparsity / low-rank penalties and their IRLS weights.

Every smoothed penalty here has the form ``sum_i h(s_i + mu**2)`` where the
``s_i`` are squared magnitudes: squared entries, squared group or column
norms, or eigenvalues of ``Z^T Z``.  The derivative of ``h`` is written as
``(coef / 2) * w(s)``, and ``w`` is what the IRLS weight matrices hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyMatrixError,
    InvalidExponentError,
    InvalidGroupsError,
    NonPositiveMuError,
)
from .linalg import sym_eig, sym_matrix_power


def check_exponent(p, name="p"):
    if not (0.0 < p <= 2.0):
        raise InvalidExponentError(f"{name} must lie in (0, 2], got {p}")
    return float(p)


def _check_mu(mu, allow_zero=False):
    mu = float(mu)
    if mu < 0 or (mu == 0 and not allow_zero) or not np.isfinite(mu):
        raise NonPositiveMuError(f"mu must be positive, got {mu}")
    return mu


def _nonempty(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0:
        raise EmptyMatrixError(f"{name} is empty")
    return a


# ---------------------------------------------------------------------------
# penalty families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerPenalty:
    """``h(s) = (s + mu^2)^(p/2)``; p = 1 gives the nuclear / l2,1 case."""

    p: float

    def __post_init__(self):
        check_exponent(self.p)

    @property
    def coef(self) -> float:
        return self.p

    def value(self, s, mu):
        s = np.clip(s, 0.0, None)
        return np.sum((s + mu * mu) ** (self.p / 2))

    def weight(self, s, mu):
        return (np.clip(s, 0.0, None) + mu * mu) ** (self.p / 2 - 1)

    def matrix_weight(self, G, mu):
        return sym_matrix_power(G, mu, self.p / 2 - 1, check=False)


@dataclass(frozen=True)
class LogPenalty:
    """``h(s) = log(s + mu^2)``, a concave surrogate of the l0 count."""

    @property
    def coef(self) -> float:
        return 2.0

    def value(self, s, mu):
        with np.errstate(divide="ignore"):
            return np.sum(np.log(np.clip(s, 0.0, None) + mu * mu))

    def weight(self, s, mu):
        return 1.0 / (np.clip(s, 0.0, None) + mu * mu)

    def matrix_weight(self, G, mu):
        return sym_matrix_power(G, mu, -1.0, check=False)


PenaltyFamily = PowerPenalty | LogPenalty


def make_penalty(kind: str, exponent: float) -> PenaltyFamily:
    if kind == "power":
        return PowerPenalty(exponent)
    if kind == "log":
        return LogPenalty()
    raise ValueError(f"unknown penalty family {kind!r}")


# ---------------------------------------------------------------------------
# exact norms
# ---------------------------------------------------------------------------


def _gram_eigenvalues(Z):
    Z = _nonempty(Z, "Z")
    return np.clip(sym_eig(Z.T @ Z, check=False).eigenvalues, 0.0, None)


def schatten_p(Z, p) -> float:
    """``sum_i sigma_i(Z)^p``, evaluated as ``Tr((Z^T Z)^(p/2))``."""
    p = check_exponent(p)
    return float(np.sum(_gram_eigenvalues(Z) ** (p / 2)))


def l2q_norm(E, q) -> float:
    """Sum over columns of ``||E_j||_2^q``."""
    q = check_exponent(q, "q")
    E = _nonempty(E, "E")
    return float(np.sum(np.sum(E * E, axis=0) ** (q / 2)))


def l12_norm(E) -> float:
    """Sum over rows of ``||E^i||_2``."""
    E = _nonempty(E, "E")
    return float(np.sum(np.sqrt(np.sum(E * E, axis=1))))


# ---------------------------------------------------------------------------
# smoothed matrix penalties
# ---------------------------------------------------------------------------


def smoothed_schatten(Z, p, mu, penalty: PenaltyFamily | None = None) -> float:
    """``Tr(Z^T Z + mu^2 I)^(p/2)``; always at least ``schatten_p(Z, p)``."""
    mu = _check_mu(mu)
    pen = penalty if penalty is not None else PowerPenalty(check_exponent(p))
    return float(pen.value(_gram_eigenvalues(Z), mu))


def smoothed_l2q(E, q, mu, penalty: PenaltyFamily | None = None) -> float:
    """``sum_j (||E_j||^2 + mu^2)^(q/2)`` over the columns of E."""
    mu = _check_mu(mu)
    pen = penalty if penalty is not None else PowerPenalty(check_exponent(q, "q"))
    E = _nonempty(E, "E")
    return float(pen.value(np.sum(E * E, axis=0), mu))


def lrr_residual(Z, X):
    X = np.asarray(X, dtype=np.float64)
    Z = np.asarray(Z, dtype=np.float64)
    n = X.shape[1]
    if Z.shape != (n, n):
        raise DimensionMismatchError(f"Z must be {n}x{n} for X of shape {X.shape}")
    return X @ Z - X


def lrr_objective(
    Z,
    X,
    p,
    q,
    lam,
    mu,
    penalty: str = "power",
    mu2: float | None = None,
) -> float:
    """Smoothed LRR objective ``L(Z) + lam * S(Z)``.

    With ``mu == 0`` this is the unsmoothed objective
    ``||Z||_{S_p}^p + lam * ||XZ - X||_{2,q}^q``.  ``mu2``, when given,
    smooths the column-sparsity term independently of the low-rank term.
    """
    E = lrr_residual(Z, X)
    mu = _check_mu(mu, allow_zero=True)
    mu2 = mu if mu2 is None else _check_mu(mu2, allow_zero=True)
    low = make_penalty(penalty, p)
    sparse = make_penalty(penalty, q)
    return float(
        low.value(_gram_eigenvalues(Z), mu)
        + lam * sparse.value(np.sum(E * E, axis=0), mu2)
    )


# ---------------------------------------------------------------------------
# vector penalties
# ---------------------------------------------------------------------------


def smoothed_lp_vector(z, p, mu) -> float:
    """``sum_i (z_i^2 + mu^2)^(p/2)``; ``mu = 0`` gives ``||z||_p^p``."""
    p = check_exponent(p)
    mu = _check_mu(mu, allow_zero=True)
    z = _nonempty(z, "z").ravel()
    return float(np.sum((z * z + mu * mu) ** (p / 2)))


def weight_lp_vector(z, p, mu) -> np.ndarray:
    """Diagonal of W with ``W_ii = (z_i^2 + mu^2)^(p/2 - 1)``; gradient is ``p W z``."""
    p = check_exponent(p)
    mu = _check_mu(mu)
    z = _nonempty(z, "z").ravel()
    return (z * z + mu * mu) ** (p / 2 - 1)


def _check_groups(groups: Sequence[Sequence[int]], n: int):
    seen = np.zeros(n, dtype=int)
    out = []
    for g in groups:
        idx = np.asarray(g, dtype=int).ravel()
        if idx.size == 0:
            raise InvalidGroupsError("empty group")
        if idx.min() < 0 or idx.max() >= n:
            raise InvalidGroupsError(f"group index out of range 0..{n - 1}")
        seen[idx] += 1
        out.append(idx)
    if not np.all(seen == 1):
        raise InvalidGroupsError("groups must partition the index set")
    return out


def smoothed_group_lasso(z, groups, p, mu) -> float:
    """``sum_i (||z_{g_i}||^2 + mu^2)^(p/2)`` for a non-overlapping partition."""
    p = check_exponent(p)
    mu = _check_mu(mu, allow_zero=True)
    z = _nonempty(z, "z").ravel()
    gs = _check_groups(groups, z.size)
    s = np.array([z[g] @ z[g] for g in gs])
    return float(np.sum((s + mu * mu) ** (p / 2)))


def weight_group_lasso(z, groups, p, mu) -> np.ndarray:
    """Block-constant diagonal weights; gradient of the smoothed penalty is ``p W z``."""
    p = check_exponent(p)
    mu = _check_mu(mu)
    z = _nonempty(z, "z").ravel()
    w = np.empty_like(z)
    for g in _check_groups(groups, z.size):
        w[g] = (z[g] @ z[g] + mu * mu) ** (p / 2 - 1)
    return w
