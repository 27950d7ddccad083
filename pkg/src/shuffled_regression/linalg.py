"""Small dense linear algebra for tall, skinny design matrices.

The number of columns stays small (n <= ~9) while the number of rows can
reach the thousands, so everything here works column-wise on ``(m, n)``
arrays and never forms anything larger than ``n x n`` except the optional
Kronecker basis used for verification.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, RankError

DEFAULT_RANK_TOL = 1e-10
_MAX_SWEEPS = 60


@dataclass(frozen=True)
class ThinSvd:
    """Rank-revealing factorization ``A = U @ diag(sigma) @ V.T``."""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def r(self) -> int:
        return int(self.sigma.shape[0])


def as_matrix(A, name: str = "A") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return A


def as_vector(v, name: str = "vector") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise InvalidInputError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return v


def _one_sided_jacobi(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonalize the columns of ``A`` by plane rotations.

    Returns ``(W, V)`` with ``A @ V = W``, ``V`` orthogonal and the columns
    of ``W`` mutually orthogonal, so that their norms are the singular values.
    """
    W = A.copy()
    n = W.shape[1]
    V = np.eye(n)
    tol = np.finfo(float).eps * W.shape[0]
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp, wq = W[:, p], W[:, q]
                alpha = wp @ wp
                beta = wq @ wq
                gamma = wp @ wq
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                W[:, [p, q]] = np.column_stack((c * wp - s * wq, s * wp + c * wq))
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            break
    return W, V


def _mgs(Q: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt pass over the columns of ``Q`` (copied)."""
    Q = Q.copy()
    for j in range(Q.shape[1]):
        for k in range(j):
            Q[:, j] -= (Q[:, k] @ Q[:, j]) * Q[:, k]
        Q[:, j] /= np.linalg.norm(Q[:, j])
    return Q


def thin_svd(A, rank_tol: float = DEFAULT_RANK_TOL) -> ThinSvd:
    """Thin SVD truncated at the numerical rank.

    Singular values not exceeding ``rank_tol * sigma_max`` are dropped. Each
    right singular vector is flipped so that its largest-magnitude entry is
    positive (the matching left vector is flipped with it).
    """
    A = as_matrix(A)
    if not 0.0 < rank_tol < 1.0:
        raise InvalidInputError(f"rank_tol must lie in (0, 1), got {rank_tol}")

    W, V = _one_sided_jacobi(A)
    norms = np.linalg.norm(W, axis=0)
    order = np.argsort(-norms, kind="stable")
    norms, W, V = norms[order], W[:, order], V[:, order]
    if norms[0] == 0.0:
        raise RankError("matrix is identically zero; the regression is vacuous")

    r = int(np.count_nonzero(norms > rank_tol * norms[0]))
    sigma = norms[:r]
    U = _mgs(W[:, :r] / sigma)
    V = V[:, :r]

    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.where(V[pivots, np.arange(r)] < 0, -1.0, 1.0)
    return ThinSvd(U=U * signs, sigma=sigma.copy(), V=V * signs)


def least_squares(A, b, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Minimum-norm minimizer of ``||A x - b||`` through the thin SVD."""
    A = as_matrix(A)
    b = as_vector(b, "b")
    if b.shape[0] != A.shape[0]:
        raise InvalidInputError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
    svd = thin_svd(A, rank_tol)
    return svd.V @ ((svd.U.T @ b) / svd.sigma)


def kron_singular_basis(y_bar, U_A) -> np.ndarray:
    """Right singular basis ``y_bar ⊗ U_A`` of ``K = y_bar.T ⊗ U_A.T``.

    Column ``i`` is ``kron(y_bar, U_A[:, i])``, so the result has shape
    ``(m * m, r)``. All singular values of ``K`` equal one.
    """
    y_bar = as_vector(y_bar, "y_bar")
    U_A = as_matrix(U_A, "U_A")
    if U_A.shape[0] != y_bar.shape[0]:
        raise InvalidInputError("y_bar and U_A must have the same number of rows")
    if abs(np.linalg.norm(y_bar) - 1.0) > 1e-12:
        raise InvalidInputError("y_bar must have unit Euclidean norm")
    return np.kron(y_bar[:, None], U_A)
