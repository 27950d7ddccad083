"""Problem instances, preprocessing and the permutation objective.

After preprocessing, a permutation ``P`` is scored by

    f(P) = -|| U_A.T @ (P y_bar) ||^2,   y_bar = y / ||y||,

which lies in ``[-1, 0]`` and relates to the least-squares residual of the
shuffled regression through ``min_x ||P y - A x||^2 = ||y||^2 (1 + f(P))``.
The search coordinates are ``z(P) = U_A.T @ (P y_bar)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import check_permutation
from .exceptions import InvalidInputError
from .linalg import DEFAULT_RANK_TOL, as_matrix, as_vector, thin_svd


@dataclass(frozen=True)
class ProblemInstance:
    A: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        y = as_vector(self.y, "y")
        m, n = A.shape
        if y.shape[0] != m:
            raise InvalidInputError(f"A has {m} rows but y has {y.shape[0]} entries")
        if m < n:
            raise InvalidInputError(f"need m >= n, got m={m}, n={n}")
        if not np.linalg.norm(y) > 0.0:
            raise InvalidInputError("y must not be the zero vector")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "y", y)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class Preprocessed:
    y_bar: np.ndarray
    y_norm: float
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    # ascending y_bar and the stable sort order producing it; reused by every bound
    y_sorted: np.ndarray = field(repr=False)
    y_order: np.ndarray = field(repr=False)

    @property
    def r(self) -> int:
        return int(self.sigma.shape[0])

    @property
    def m(self) -> int:
        return int(self.y_bar.shape[0])

    @property
    def u_cols(self) -> list[np.ndarray]:
        return [self.U[:, i] for i in range(self.r)]

    def z_of(self, perm) -> np.ndarray:
        """Search coordinates ``U_A.T @ (P y_bar)`` of a permutation."""
        return self.U.T @ self.y_bar[perm]


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned box ``[l, u]`` in the search coordinates."""

    l: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        l = np.asarray(self.l, dtype=float)
        u = np.asarray(self.u, dtype=float)
        if l.shape != u.shape or l.ndim != 1:
            raise InvalidInputError("rectangle bounds must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(l)) and np.all(np.isfinite(u))):
            raise InvalidInputError("rectangle bounds must be finite")
        if np.any(l > u):
            raise InvalidInputError("rectangle needs l <= u coordinate-wise")
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "u", u)

    @property
    def widths(self) -> np.ndarray:
        return self.u - self.l

    def contains(self, z, tol: float = 0.0) -> bool:
        z = np.asarray(z)
        return bool(np.all(z >= self.l - tol) and np.all(z <= self.u + tol))


def preprocess(inst: ProblemInstance, rank_tol: float = DEFAULT_RANK_TOL) -> Preprocessed:
    y_norm = float(np.linalg.norm(inst.y))
    if y_norm == 0.0:
        raise InvalidInputError("y must not be the zero vector")
    y_bar = inst.y / y_norm
    svd = thin_svd(inst.A, rank_tol)
    order = np.argsort(y_bar, kind="stable")
    return Preprocessed(
        y_bar=y_bar,
        y_norm=y_norm,
        U=svd.U,
        sigma=svd.sigma,
        V=svd.V,
        y_sorted=y_bar[order],
        y_order=order,
    )


def objective_f(perm, prep: Preprocessed) -> float:
    perm = check_permutation(perm, prep.m)
    z = prep.z_of(perm)
    return -float(z @ z)


def initial_rectangle(prep: Preprocessed) -> Rectangle:
    """Smallest box containing ``z(B)`` for every doubly stochastic ``B``.

    Each coordinate is a linear function of ``B``, so its extremes are hit
    at permutations and follow from sorting: pairing ascending ``u_i`` with
    ascending ``y_bar`` gives the maximum, with descending ``y_bar`` the
    minimum.
    """
    cols_sorted = np.sort(prep.U, axis=0)
    upper = cols_sorted.T @ prep.y_sorted
    lower = cols_sorted.T @ prep.y_sorted[::-1]
    return Rectangle(np.minimum(lower, upper), np.maximum(lower, upper))


def recover_signal(perm, inst: ProblemInstance, prep: Preprocessed) -> np.ndarray:
    """Minimum-norm least-squares signal for the unshuffled data ``P y``."""
    perm = check_permutation(perm, inst.m)
    w = prep.U.T @ inst.y[perm]
    return prep.V @ (w / prep.sigma)
