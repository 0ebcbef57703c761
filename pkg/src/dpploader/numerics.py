"""Dense linear algebra shared by the samplers and the oracles.

Matrices are plain ``numpy`` arrays. Functions that need a matrix with
unit-norm columns accept any array and validate it; ``normalize_columns``
is the one place such matrices are produced.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    NotSquareError,
    OddDimensionError,
    RankDeficientError,
    ZeroColumnError,
)

RANK_TOL = 1e-10
UNIT_NORM_TOL = 1e-12


def _as_matrix(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("matrix has non-finite entries")
    return X


def check_rank(X, tol=RANK_TOL):
    """Raise RankDeficientError unless the columns of X are independent.

    Uses a column-pivoted QR; a pivot is considered zero when it is below
    ``tol`` relative to the largest one.
    """
    X = _as_matrix(X)
    n, r = X.shape
    if r == 0:
        return
    if r > n:
        raise RankDeficientError(f"{r} columns cannot be independent in dimension {n}")
    R = scipy.linalg.qr(X, mode="r", pivoting=True)[0]
    pivots = np.abs(np.diag(R))
    if pivots[0] == 0.0 or pivots[-1] < tol * pivots[0]:
        raise RankDeficientError(
            f"columns are linearly dependent (pivot ratio {pivots[-1] / max(pivots[0], 1e-300):.3g})"
        )


def normalize_columns(X, check=True):
    """Return X with every column scaled to unit Euclidean norm."""
    X = _as_matrix(X)
    norms = np.linalg.norm(X, axis=0)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroColumnError(int(zero[0]))
    if check:
        check_rank(X)
    return X / norms


def has_unit_columns(X, tol=UNIT_NORM_TOL):
    X = _as_matrix(X)
    return bool(np.all(np.abs(np.linalg.norm(X, axis=0) - 1.0) <= tol))


def gram(X):
    X = _as_matrix(X)
    return X.T @ X


def skew_part(A):
    """Strict upper triangle minus its transpose; the diagonal is dropped."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {A.shape}")
    upper = np.triu(A, 1)
    return upper - upper.T


def is_skew_symmetric(A, tol=0.0):
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and np.all(np.abs(A + A.T) <= tol)


def pfaffian(A):
    """Pfaffian of a real or complex skew-symmetric matrix.

    Parlett-Reid reduction to tridiagonal form with partial pivoting: at
    each step the largest entry of the current column is swapped into the
    sub-diagonal position, and the permutation sign is tracked. The
    convention is ``pfaffian([[0, 1], [-1, 0]]) == 1``.
    """
    A = np.asarray(A)
    A = np.array(A, dtype=np.result_type(A.dtype, float))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n % 2:
        raise OddDimensionError(f"pfaffian of odd dimension {n}")
    result = A.dtype.type(1.0)
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            result = -result
        pivot = A[k, k + 1]
        if pivot == 0:
            return A.dtype.type(0.0)
        result = result * pivot
        if k + 2 < n:
            tau = A[k, k + 2:] / pivot
            col = A[k + 2:, k + 1].copy()
            # Gauss transform eliminating row/column k beyond the band
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return result


@dataclass(frozen=True)
class YoulaDecomposition:
    """Canonical form of a real skew-symmetric matrix.

    ``S = sum_l i*nu_l u_l u_l^* - i*nu_l conj(u_l) conj(u_l)^*`` with the
    ``nus`` sorted in decreasing order. ``unpaired`` is a real unit null
    vector, present exactly when the dimension is odd.
    """

    nus: np.ndarray
    paired: np.ndarray  # columns u_l, complex
    unpaired: np.ndarray | None

    def reconstruct(self):
        U = self.paired
        S = (U * (1j * self.nus)) @ U.conj().T
        S = S + S.conj()
        return S.real


def youla(S, tol=1e-12):
    """Youla decomposition computed from a real Schur form of S."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {S.shape}")
    d = S.shape[0]
    if d == 0:
        return YoulaDecomposition(np.zeros(0), np.zeros((0, 0), complex), None)
    try:
        T, Z = scipy.linalg.schur(S, output="real")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(str(exc)) from exc

    scale = max(np.abs(S).max(), 1.0)
    pairs, nulls = [], []
    p = 0
    while p < d:
        if p + 1 < d and abs(T[p + 1, p]) > tol * scale:
            a, b = Z[:, p], Z[:, p + 1]
            u = (a + 1j * b) / np.sqrt(2)
            nu = float(np.real(-1j * (u.conj() @ S @ u)))
            if nu < 0:
                u, nu = u.conj(), -nu
            pairs.append((nu, u))
            p += 2
        else:
            nulls.append(Z[:, p])
            p += 1

    unpaired = None
    if len(nulls) % 2:
        unpaired = nulls.pop()
    for a, b in zip(nulls[0::2], nulls[1::2]):
        pairs.append((0.0, (a + 1j * b) / np.sqrt(2)))

    pairs.sort(key=lambda item: -item[0])
    nus = np.array([nu for nu, _ in pairs])
    paired = np.column_stack([u for _, u in pairs]) if pairs else np.zeros((d, 0), complex)
    return YoulaDecomposition(nus, paired, unpaired)


def projection_kernel(X):
    """Orthogonal projector onto the column space of X."""
    X = _as_matrix(X)
    check_rank(X)
    Q, _ = np.linalg.qr(X)
    return Q @ Q.T


def smallest_eigenvalue(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix is not symmetric")
    try:
        return float(np.linalg.eigvalsh(A)[0])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def inverse_sqrt_psd(G):
    """Symmetric inverse square root of a positive definite matrix."""
    w, V = np.linalg.eigh(G)
    if w[0] <= 0:
        raise RankDeficientError("Gram matrix is singular")
    return (V / np.sqrt(w)) @ V.T
