"""Smoothed LRR solved by iteratively reweighted least squares.

The problem is

    min_Z  Tr(Z^T Z + mu^2 I)^(p/2) + lam * sum_i (||(XZ - X)_i||^2 + mu^2)^(q/2)

and each IRLS iteration alternates a Sylvester solve for Z with fixed
weights and a closed-form weight update for fixed Z, while mu is annealed
geometrically towards a positive floor.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyMatrixError,
    InvalidParamsError,
    NearSingularPencilError,
    NonPositiveMuError,
    ConvergenceWarning,
)
from .linalg import solve_sylvester, spectral_norm
from .norms import check_exponent, lrr_objective, make_penalty
from .trace import IterationRecord, SolveTrace


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of :func:`solve_smoothed_lrr`.

    ``mu_floor`` and ``epsilon`` default to data-relative values
    (``1e-8 * ||X||_2`` and ``1e-5 * max(1, max|X_ij|)``) when left as None.
    ``mu2_c``, if set, gives the column-sparsity term its own smoothing
    parameter (initialised at ``mu2_c * ||X||_2``, annealed with the same
    ``rho``); by default both terms share one mu.
    """

    p: float = 1.0
    q: float = 1.0
    lam: float = 0.5
    mu_c: float = 0.1
    rho: float = 1.1
    mu_floor: Optional[float] = None
    epsilon: Optional[float] = None
    max_iter: int = 1000
    penalty: str = "power"
    mu2_c: Optional[float] = None

    def __post_init__(self):
        try:
            check_exponent(self.p, "p")
            check_exponent(self.q, "q")
            make_penalty(self.penalty, self.p)
        except ValueError as exc:
            raise InvalidParamsError(str(exc)) from exc
        if not self.lam > 0:
            raise InvalidParamsError("lam must be positive")
        if not self.mu_c > 0 or (self.mu2_c is not None and not self.mu2_c > 0):
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


@dataclass(frozen=True)
class WeightState:
    """IRLS weights: symmetric PD ``M`` and the diagonal of ``N``."""

    M: np.ndarray
    N: np.ndarray

    @property
    def N_matrix(self) -> np.ndarray:
        return np.diag(self.N)

    @classmethod
    def identity(cls, n: int) -> "WeightState":
        return cls(np.eye(n), np.ones(n))


def _check_data(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatchError("X must be a 2-D matrix")
    if X.size == 0:
        raise EmptyMatrixError("X is empty")
    return X


def _gram(X):
    G = X.T @ X
    return 0.5 * (G + G.T)


def update_weights(Z, X, p, q, mu, penalty="power", mu2=None) -> WeightState:
    """Weights for the current iterate.

    ``M = (Z^T Z + mu^2 I)^(p/2 - 1)`` and
    ``N_ii = (||(XZ - X)_i||^2 + mu2^2)^(q/2 - 1)``; for the logarithm
    penalty the exponents become -1.
    """
    X = _check_data(X)
    Z = np.asarray(Z, dtype=np.float64)
    n = X.shape[1]
    if Z.shape != (n, n):
        raise DimensionMismatchError(f"Z must be {n}x{n}")
    if not mu > 0:
        raise NonPositiveMuError(f"mu must be positive, got {mu}")
    mu2 = mu if mu2 is None else mu2
    if not mu2 > 0:
        raise NonPositiveMuError(f"mu2 must be positive, got {mu2}")
    E = X @ Z - X
    M = make_penalty(penalty, p).matrix_weight(_gram(Z), mu)
    N = make_penalty(penalty, q).weight(np.sum(E * E, axis=0), mu2)
    return WeightState(M, N)


def lrr_gradient(Z, X, p, q, lam, weights: WeightState, penalty="power") -> np.ndarray:
    """``cp Z M + lam cq X^T (XZ - X) N`` (cp = p, cq = q for the power family)."""
    cp = make_penalty(penalty, p).coef
    cq = make_penalty(penalty, q).coef
    E = X @ Z - X
    return cp * Z @ weights.M + lam * cq * (X.T @ E) * weights.N


def irls_step(X, weights: WeightState, p, q, lam, penalty="power", XtX=None) -> np.ndarray:
    """Minimise the weighted quadratic model for fixed weights.

    Solves ``lam q X^T X Z + Z (p M N^-1) = lam q X^T X``.  The right
    coefficient is similar to the SPD matrix ``p N^-1/2 M N^-1/2``, so the
    equation is solved in that basis (``Y = Z N^1/2``) where both Schur
    factors are diagonal, then mapped back.
    """
    X = _check_data(X)
    cp = make_penalty(penalty, p).coef
    cq = make_penalty(penalty, q).coef
    G = _gram(X) if XtX is None else XtX
    M, N = weights.M, weights.N
    s = np.sqrt(N)
    A = lam * cq * G
    B = cp * (M / s[:, None]) / s[None, :]
    B = 0.5 * (B + B.T)
    Y = solve_sylvester(A, B, A * s[None, :])
    Z = Y / s[None, :]

    # first-order condition of the weighted problem, in the original form
    res = np.linalg.norm(cp * Z @ M + lam * cq * (G @ Z - G) * N)
    scale = cp * np.linalg.norm(M) + lam * cq * np.linalg.norm(G) * np.linalg.norm(N)
    if not np.isfinite(res) or res > 1e-7 * scale * max(np.linalg.norm(Z), 1.0):
        raise NearSingularPencilError(f"IRLS step residual {res:.3e} too large")
    return Z


def stationarity_residual(Z, X, p, q, lam, mu, penalty="power", mu2=None, weights=None) -> float:
    """``||dJ/dZ||_F / max(||Z||_F, 1)`` with weights rebuilt from Z at ``mu``."""
    X = _check_data(X)
    Z = np.asarray(Z, dtype=np.float64)
    if weights is None:
        weights = update_weights(Z, X, p, q, mu, penalty, mu2)
    g = lrr_gradient(Z, X, p, q, lam, weights, penalty)
    return float(np.linalg.norm(g) / max(np.linalg.norm(Z), 1.0))


def initial_mu(X, config: SolverConfig):
    """Starting smoothing level(s), floor and stopping threshold for X."""
    norm2 = spectral_norm(X)
    mu = config.mu_c * norm2
    mu2 = None if config.mu2_c is None else config.mu2_c * norm2
    floor = 1e-8 * norm2 if config.mu_floor is None else config.mu_floor
    eps = config.epsilon
    if eps is None:
        eps = 1e-5 * max(1.0, float(np.abs(X).max()))
    if mu > 0 and floor >= mu:
        raise InvalidParamsError("mu_floor must be below mu_c * ||X||_2")
    return mu, mu2, floor, eps


IterationCallback = Callable[[int, np.ndarray, np.ndarray, WeightState, float], None]


def solve_smoothed_lrr(
    X,
    config: SolverConfig = SolverConfig(),
    callback: Optional[IterationCallback] = None,
):
    """Run IRLS on the smoothed LRR problem.

    Parameters
    ----------
    X : ndarray, shape (d, n)
        Data matrix, one sample per column.
    config : SolverConfig
    callback : callable, optional
        Called after every Z update as
        ``callback(t, Z_new, Z_old, weights_used, mu_used)`` where
        ``weights_used`` were built from ``Z_old`` at ``mu_used``.
        ``Z_old`` is the zero matrix on the first call.

    Returns
    -------
    Z : ndarray, shape (n, n)
        Final iterate; if ``max_iter`` is hit, the iterate with the lowest
        unsmoothed objective instead.
    trace : SolveTrace
        One record per iteration; ``trace.converged`` is False if
        ``max_iter`` was reached first (a :class:`ConvergenceWarning` is
        also issued).
    """
    X = _check_data(X)
    n = X.shape[1]
    p, q, lam, penalty = config.p, config.q, config.lam, config.penalty
    G = _gram(X)
    trace = SolveTrace()

    if not np.any(X):
        # J(0) = n mu^p + lam n mu^q is the global minimum for any p, q
        Z = np.zeros((n, n))
        trace.records.append(
            IterationRecord(1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        )
        trace.converged = True
        trace.epsilon = config.epsilon or 1e-5
        return Z, trace

    mu, mu2, floor, eps = initial_mu(X, config)
    trace.epsilon = eps

    weights = WeightState.identity(n)
    mu_used = mu
    Z_old = np.zeros((n, n))
    best = (np.inf, None)
    start = time.perf_counter()
    for t in range(1, int(config.max_iter) + 1):
        try:
            Z = irls_step(X, weights, p, q, lam, penalty, XtX=G)
        except np.linalg.LinAlgError as exc:
            raise type(exc)(f"iteration {t}: {exc}") from exc
        if callback is not None:
            callback(t, Z, Z_old, weights, mu_used)
        weights = update_weights(Z, X, p, q, mu, penalty, mu2)
        dZ = Z - Z_old
        rec = IterationRecord(
            t=t,
            mu=mu,
            j_smoothed=lrr_objective(Z, X, p, q, lam, mu, penalty, mu2),
            j_exact=lrr_objective(Z, X, p, q, lam, 0.0, penalty),
            dz_inf=float(np.abs(dZ).max()),
            dz_fro=float(np.linalg.norm(dZ)),
            stationarity=stationarity_residual(Z, X, p, q, lam, mu, penalty, mu2, weights),
            seconds=time.perf_counter() - start,
        )
        trace.records.append(rec)
        if rec.j_exact < best[0]:
            best = (rec.j_exact, Z)
        Z_old = Z
        mu_used = mu
        if rec.dz_inf <= eps:
            trace.converged = True
            break
        mu = max(mu / config.rho, floor)
        if mu2 is not None:
            mu2 = max(mu2 / config.rho, floor)

    if not trace.converged:
        warnings.warn(
            f"IRLS stopped at max_iter={config.max_iter} without meeting epsilon={eps:.3g}",
            ConvergenceWarning,
            stacklevel=2,
        )
        return best[1], trace
    return Z_old, trace
