"""Inductive robust PCA with a row-sparse error term, solved by IRLS.

Learns a projection P (d x d) from training data X (d x n) by minimising

    ||P||_* + lam * ||PX - X||_{1,2}

where ``||E||_{1,2}`` sums the l2 norms of the rows of E.  Both terms are
smoothed with mu; each iteration solves ``M P + lam N (PX - X) X^T = 0``
for fixed weights.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import (
    ConvergenceWarning,
    DimensionMismatchError,
    EmptyMatrixError,
    InvalidParamsError,
    NearSingularPencilError,
    NonPositiveMuError,
)
from .linalg import solve_sylvester, spectral_norm, sym_eig, sym_matrix_power
from .lrr import WeightState
from .trace import IterationRecord, SolveTrace


@dataclass(frozen=True)
class IrpcaConfig:
    lam: float = 0.5
    mu_c: float = 0.1
    rho: float = 1.1
    mu_floor: Optional[float] = None
    epsilon: Optional[float] = None
    max_iter: int = 1000

    def __post_init__(self):
        if not self.lam > 0:
            raise InvalidParamsError("lam must be positive")
        if not self.mu_c > 0:
            raise InvalidParamsError("mu_c must be positive")
        if not self.rho >= 1:
            raise InvalidParamsError("rho must be >= 1")
        if self.mu_floor is not None and self.mu_floor < 0:
            raise InvalidParamsError("mu_floor must be nonnegative")
        if self.epsilon is not None and not self.epsilon > 0:
            raise InvalidParamsError("epsilon must be positive")
        if int(self.max_iter) < 1:
            raise InvalidParamsError("max_iter must be a positive integer")

    def to_dict(self) -> dict:
        return asdict(self)


def _check_pair(P, X):
    X = np.asarray(X, dtype=np.float64)
    P = np.asarray(P, dtype=np.float64)
    if X.ndim != 2 or X.size == 0:
        raise EmptyMatrixError("X must be a nonempty 2-D matrix")
    d = X.shape[0]
    if P.shape != (d, d):
        raise DimensionMismatchError(f"P must be {d}x{d} for X of shape {X.shape}")
    return P, X


def _sym(G):
    return 0.5 * (G + G.T)


def irpca_objective(P, X, lam, mu) -> float:
    """``Tr(PP^T + mu^2 I)^(1/2) + lam sum_i (||(PX - X)^i||^2 + mu^2)^(1/2)``.

    ``mu = 0`` gives the unsmoothed ``||P||_* + lam ||PX - X||_{1,2}``.
    """
    P, X = _check_pair(P, X)
    if mu < 0:
        raise NonPositiveMuError("mu must be nonnegative")
    ev = np.clip(sym_eig(_sym(P @ P.T), check=False).eigenvalues, 0.0, None)
    E = P @ X - X
    rows = np.sum(E * E, axis=1)
    return float(np.sum(np.sqrt(ev + mu * mu)) + lam * np.sum(np.sqrt(rows + mu * mu)))


def update_irpca_weights(P, X, mu) -> WeightState:
    """``M = (PP^T + mu^2 I)^(-1/2)``, ``N_ii = (||(PX - X)^i||^2 + mu^2)^(-1/2)``."""
    P, X = _check_pair(P, X)
    if not mu > 0:
        raise NonPositiveMuError(f"mu must be positive, got {mu}")
    E = P @ X - X
    M = sym_matrix_power(_sym(P @ P.T), mu, -0.5, check=False)
    N = (np.sum(E * E, axis=1) + mu * mu) ** -0.5
    return WeightState(M, N)


def irpca_gradient(P, X, lam, weights: WeightState) -> np.ndarray:
    """Gradient of the smoothed objective: ``M P + lam N (PX - X) X^T``."""
    E = P @ X - X
    return weights.M @ P + lam * weights.N[:, None] * (E @ X.T)


def irpca_step(X, weights: WeightState, lam, XXt=None) -> np.ndarray:
    """Solve ``M P + lam N (PX - X) X^T = 0`` for P with fixed weights.

    Left-multiplying by ``N^-1`` gives the Sylvester equation
    ``(N^-1 M) P + P (lam X X^T) = lam X X^T``; ``N^-1 M`` is not symmetric,
    so the general Schur path of :func:`solve_sylvester` is used.
    """
    X = np.asarray(X, dtype=np.float64)
    G = _sym(X @ X.T) if XXt is None else XXt
    M, N = weights.M, weights.N
    B = lam * G
    P = solve_sylvester(M / N[:, None], B, B)

    res = np.linalg.norm(M @ P + lam * N[:, None] * (P @ G - G))
    scale = np.linalg.norm(M) + lam * np.linalg.norm(N) * np.linalg.norm(G)
    if not np.isfinite(res) or res > 1e-7 * scale * max(np.linalg.norm(P), 1.0):
        raise NearSingularPencilError(f"IRPCA step residual {res:.3e} too large")
    return P


def irpca_stationarity(P, X, lam, mu, weights=None) -> float:
    if weights is None:
        weights = update_irpca_weights(P, X, mu)
    g = irpca_gradient(P, X, lam, weights)
    return float(np.linalg.norm(g) / max(np.linalg.norm(P), 1.0))


def solve_irpca(X, config: IrpcaConfig = IrpcaConfig(), callback=None):
    """Learn the IRPCA projection by IRLS.

    Mirrors :func:`smoothlrr.lrr.solve_smoothed_lrr`: weights start at the
    identity, ``mu_0 = mu_c ||X||_2`` is divided by ``rho`` after every
    weight update down to ``mu_floor``, and the loop stops once
    ``max|P_{t+1} - P_t| <= epsilon``.

    Returns
    -------
    P : ndarray, shape (d, d)
    trace : SolveTrace
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.size == 0:
        raise EmptyMatrixError("X must be a nonempty 2-D matrix")
    d = X.shape[0]
    lam = config.lam
    trace = SolveTrace()
    if not np.any(X):
        trace.records.append(IterationRecord(1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))
        trace.converged = True
        return np.zeros((d, d)), trace

    norm2 = spectral_norm(X)
    mu = config.mu_c * norm2
    floor = 1e-8 * norm2 if config.mu_floor is None else config.mu_floor
    if floor >= mu:
        raise InvalidParamsError("mu_floor must be below mu_c * ||X||_2")
    eps = config.epsilon if config.epsilon is not None else 1e-5 * max(1.0, np.abs(X).max())
    trace.epsilon = eps

    G = _sym(X @ X.T)
    weights = WeightState.identity(d)
    mu_used = mu
    P_old = np.zeros((d, d))
    best = (np.inf, None)
    start = time.perf_counter()
    for t in range(1, int(config.max_iter) + 1):
        try:
            P = irpca_step(X, weights, lam, XXt=G)
        except np.linalg.LinAlgError as exc:
            raise type(exc)(f"iteration {t}: {exc}") from exc
        if callback is not None:
            callback(t, P, P_old, weights, mu_used)
        weights = update_irpca_weights(P, X, mu)
        dP = P - P_old
        rec = IterationRecord(
            t=t,
            mu=mu,
            j_smoothed=irpca_objective(P, X, lam, mu),
            j_exact=irpca_objective(P, X, lam, 0.0),
            dz_inf=float(np.abs(dP).max()),
            dz_fro=float(np.linalg.norm(dP)),
            stationarity=irpca_stationarity(P, X, lam, mu, weights),
            seconds=time.perf_counter() - start,
        )
        trace.records.append(rec)
        if rec.j_exact < best[0]:
            best = (rec.j_exact, P)
        P_old = P
        mu_used = mu
        if rec.dz_inf <= eps:
            trace.converged = True
            break
        mu = max(mu / config.rho, floor)

    if not trace.converged:
        warnings.warn(
            f"IRPCA stopped at max_iter={config.max_iter} without meeting epsilon={eps:.3g}",
            ConvergenceWarning,
            stacklevel=2,
        )
        return best[1], trace
    return P_old, trace


def apply_projection(P, X_test) -> np.ndarray:
    """Clean new samples by left multiplication with the learned projection."""
    P = np.asarray(P, dtype=np.float64)
    X_test = np.asarray(X_test, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise DimensionMismatchError("P must be square")
    if X_test.ndim != 2 or X_test.shape[0] != P.shape[1]:
        raise DimensionMismatchError(
            f"X_test has shape {X_test.shape}, expected {P.shape[1]} rows"
        )
    return P @ X_test
