"""Dense linear-algebra kernels used by the IRLS solvers.

Matrices are plain 2-D ``float64`` numpy arrays (C order in memory; the
binary file format in :mod:`smoothlrr.io` is column-major).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import (
    DimensionMismatchError,
    EigFailedToConvergeError,
    EmptyMatrixError,
    NearSingularPencilError,
    NotSquareError,
    NotSymmetricError,
    SingularShiftError,
)

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class SymEigDecomposition:
    """Eigen-pairs of a symmetric matrix, eigenvalues in descending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.T


def _as_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise EmptyMatrixError(f"{name} is empty")
    return a


def _check_square(a, name="matrix"):
    if a.shape[0] != a.shape[1]:
        raise NotSquareError(f"{name} must be square, got shape {a.shape}")


def sym_eig(S, *, check: bool = True) -> SymEigDecomposition:
    """Eigendecomposition of a symmetric matrix.

    The input is symmetrized as ``(S + S.T) / 2`` before calling LAPACK, so
    round-off asymmetry below the tolerance ``1e-8 * ||S||_F`` is ignored.
    """
    S = _as_matrix(S, "S")
    _check_square(S, "S")
    if check:
        scale = np.linalg.norm(S)
        if np.linalg.norm(S - S.T) > 1e-8 * scale:
            raise NotSymmetricError("S is not symmetric")
    try:
        w, V = np.linalg.eigh(0.5 * (S + S.T))
    except np.linalg.LinAlgError as exc:
        raise EigFailedToConvergeError(str(exc)) from exc
    return SymEigDecomposition(w[::-1].copy(), V[:, ::-1].copy())


def sym_matrix_power(S, mu: float, alpha: float, *, check: bool = True) -> np.ndarray:
    """Compute ``(S + mu**2 I) ** alpha`` for symmetric PSD ``S``.

    Eigenvalues of ``S`` are clamped at zero before the shift, so tiny
    negative values produced by forming a Gram matrix do not leak into
    fractional powers.

    Parameters
    ----------
    S : ndarray, shape (n, n)
        Symmetric positive semidefinite matrix.
    mu : float
        Shift parameter; the spectrum is moved by ``mu**2``.
    alpha : float
        Real exponent.

    Returns
    -------
    ndarray, shape (n, n)
        Symmetric matrix with eigenvalues ``(lambda_i + mu**2) ** alpha``.

    Raises
    ------
    SingularShiftError
        If ``alpha < 0`` and the shifted spectrum touches zero.
    """
    dec = sym_eig(S, check=check)
    shifted = np.clip(dec.eigenvalues, 0.0, None) + float(mu) ** 2
    if alpha < 0 and shifted.min() <= 0.0:
        raise SingularShiftError("negative power of a singular matrix (mu = 0)")
    V = dec.eigenvectors
    out = (V * shifted**alpha) @ V.T
    return 0.5 * (out + out.T)


def spectral_norm(X) -> float:
    """Largest singular value, via the eigenvalues of the smaller Gram matrix."""
    X = _as_matrix(X, "X")
    d, n = X.shape
    G = X @ X.T if d <= n else X.T @ X
    try:
        lam = np.linalg.eigvalsh(G)[-1]
    except np.linalg.LinAlgError as exc:
        raise EigFailedToConvergeError(str(exc)) from exc
    return float(np.sqrt(max(lam, 0.0)))


# ---------------------------------------------------------------------------
# Sylvester equation A Z + Z B = C (Bartels-Stewart)
# ---------------------------------------------------------------------------


def _schur(A):
    """Real Schur form ``A = U S U^T``; diagonal ``S`` for exactly symmetric input."""
    if np.array_equal(A, A.T):
        w, U = np.linalg.eigh(A)
        return np.diag(w), U
    S, U = sla.schur(A, output="real")
    return S, U


def _is_diagonal(S):
    return not np.count_nonzero(S - np.diag(np.diag(S)))


def _blocks(S):
    """Start index and size of each diagonal block of a quasi-triangular matrix."""
    n = S.shape[0]
    out = []
    i = 0
    while i < n:
        if i + 1 < n and S[i + 1, i] != 0.0:
            out.append((i, 2))
            i += 2
        else:
            out.append((i, 1))
            i += 1
    return out


def _check_pivots(s, t):
    """Reject scalar pivots ``s + t`` that cancel to working precision.

    A small pivot without cancellation (e.g. a zero eigenvalue of a PSD
    factor plus a small positive one) is still computed accurately; its
    effect on the solution is judged by the residual postcondition.
    """
    piv = s + t
    if np.any(np.abs(piv) <= 16 * _EPS * (np.abs(s) + np.abs(t))):
        raise NearSingularPencilError("spectra of A and -B overlap to working precision")
    return piv


def _small_sylvester(Skk, Tjj, R, scale):
    # (I_b kron Skk + Tjj^T kron I_a) vec(Y) = vec(R), column-major vec
    a, b = R.shape
    K = np.kron(np.eye(b), Skk) + np.kron(Tjj.T, np.eye(a))
    if a == b == 1:
        return R / _check_pivots(Skk[0, 0], Tjj[0, 0])
    if a * b == 2:
        det = K[0, 0] * K[1, 1] - K[0, 1] * K[1, 0]
        # |det| / ||K||_F bounds the smallest singular value from below
        if abs(det) <= 16 * _EPS * max(scale, 1e-300) * np.linalg.norm(K):
            raise NearSingularPencilError("singular 2x2 Sylvester block")
        r = R.reshape(-1, order="F")
        y = np.array(
            [K[1, 1] * r[0] - K[0, 1] * r[1], K[0, 0] * r[1] - K[1, 0] * r[0]]
        ) / det
        return y.reshape((a, b), order="F")
    sv = np.linalg.svd(K, compute_uv=False)
    if sv[-1] <= 16 * _EPS * max(scale, sv[0]):
        raise NearSingularPencilError(f"singular {a}x{b} Sylvester block")
    y = np.linalg.solve(K, R.reshape(-1, order="F"))
    return y.reshape((a, b), order="F")


def _quasi_triangular_column_solve(S, S_blocks, Tjj, R, scale):
    """Solve ``S Y + Y Tjj = R`` for Y, with S quasi upper triangular."""
    m = S.shape[0]
    Y = np.zeros_like(R)
    for start, size in reversed(S_blocks):
        stop = start + size
        rhs = R[start:stop] - S[start:stop, stop:] @ Y[stop:]
        Y[start:stop] = _small_sylvester(S[start:stop, start:stop], Tjj, rhs, scale)
    return Y


def _solve_schur_sylvester(S, T, F):
    """Solve ``S Y + Y T = F`` with S, T upper quasi-triangular."""
    m, n = F.shape
    scale = np.abs(S).max(initial=0.0) + np.abs(T).max(initial=0.0)
    if _is_diagonal(S) and _is_diagonal(T):
        # both factors diagonal (symmetric coefficients)
        return F / _check_pivots(np.diag(S)[:, None], np.diag(T)[None, :])
    S_blocks = _blocks(S)
    S_triangular = all(size == 1 for _, size in S_blocks)
    diagS = np.diag(S)
    Y = np.zeros_like(F)
    eye = np.eye(m)
    for start, size in _blocks(T):
        stop = start + size
        rhs = F[:, start:stop] - Y[:, :start] @ T[:start, start:stop]
        Tjj = T[start:stop, start:stop]
        if size == 1 and S_triangular:
            t = Tjj[0, 0]
            _check_pivots(diagS, t)
            Y[:, start] = sla.solve_triangular(S + t * eye, rhs[:, 0], lower=False)
        else:
            Y[:, start:stop] = _quasi_triangular_column_solve(
                S, S_blocks, Tjj, rhs, scale
            )
    return Y


def sylvester_residual(A, B, C, Z) -> float:
    return float(np.linalg.norm(A @ Z + Z @ B - C))


def solve_sylvester(A, B, C, *, check: bool = True) -> np.ndarray:
    """Solve ``A Z + Z B = C`` by the Bartels-Stewart method.

    Both coefficient matrices are reduced to real Schur form; the
    transformed equation is then solved column-block by column-block with
    back-substitution over the diagonal blocks of the Schur factor of A.
    1x1 and 2x2 diagonal blocks are handled by direct solves of the
    corresponding (up to 4x4) Kronecker systems.

    Parameters
    ----------
    A : ndarray, shape (m, m)
    B : ndarray, shape (n, n)
    C : ndarray, shape (m, n)
    check : bool
        Verify the residual bound
        ``||AZ + ZB - C||_F <= 1e-8 (||A||_F + ||B||_F) ||Z||_F + 1e-12``
        and raise if it fails.

    Raises
    ------
    DimensionMismatchError
    NearSingularPencilError
        If A and -B share an eigenvalue to working precision, or the
        residual check fails.
    """
    A = _as_matrix(A, "A")
    B = _as_matrix(B, "B")
    C = _as_matrix(C, "C")
    _check_square(A, "A")
    _check_square(B, "B")
    if C.shape != (A.shape[0], B.shape[0]):
        raise DimensionMismatchError(
            f"C has shape {C.shape}, expected {(A.shape[0], B.shape[0])}"
        )
    if not (np.isfinite(A).all() and np.isfinite(B).all() and np.isfinite(C).all()):
        raise NearSingularPencilError("non-finite coefficients")

    S, U = _schur(A)
    T, V = _schur(B)
    F = U.T @ C @ V
    Y = _solve_schur_sylvester(S, T, F)
    Z = U @ Y @ V.T

    if check:
        res = sylvester_residual(A, B, C, Z)
        bound = 1e-8 * (np.linalg.norm(A) + np.linalg.norm(B)) * np.linalg.norm(Z) + 1e-12
        if not np.isfinite(res) or res > bound:
            raise NearSingularPencilError(
                f"Sylvester residual {res:.3e} exceeds bound {bound:.3e}"
            )
    return Z
