"""Permutation optimization kernels.

A permutation is stored as an integer array ``perm`` of length ``m`` with
``(P y)[i] == y[perm[i]]``, i.e. slot ``i`` takes source entry ``perm[i]``.
"""
from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError
from .linalg import as_matrix, as_vector


def check_permutation(perm, m: int | None = None) -> np.ndarray:
    """Validate that ``perm`` is a bijection on ``range(len(perm))``."""
    perm = np.asarray(perm)
    if perm.ndim != 1 or not np.issubdtype(perm.dtype, np.integer):
        raise InvalidInputError("a permutation must be a 1-D integer array")
    if m is not None and perm.shape[0] != m:
        raise InvalidInputError(f"permutation has length {perm.shape[0]}, expected {m}")
    k = perm.shape[0]
    if k and (perm.min() < 0 or perm.max() >= k or np.bincount(perm, minlength=k).max() != 1):
        raise InvalidInputError("permutation is not a bijection")
    return perm.astype(np.intp, copy=False)


def identity_permutation(m: int) -> np.ndarray:
    return np.arange(m, dtype=np.intp)


def invert_permutation(perm) -> np.ndarray:
    perm = check_permutation(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.shape[0], dtype=np.intp)
    return inv


def apply_permutation(perm, y) -> np.ndarray:
    """Return ``P y`` for the permutation encoded by ``perm``."""
    return np.asarray(y)[perm]


def _pair_sorted(slots: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """Pair the k-th smallest slot value with the k-th smallest source value.

    Ties among ``slots`` are broken by the rank of the source entry sitting
    at the same index, so an already-aligned pair yields the identity.
    """
    order_src = np.argsort(sources, kind="stable")
    rank_src = np.empty_like(order_src)
    rank_src[order_src] = np.arange(order_src.shape[0])
    order_slots = np.lexsort((rank_src, slots))
    perm = np.empty_like(order_src)
    perm[order_slots] = order_src
    return perm


def _solve_min_assignment(cost: np.ndarray) -> np.ndarray:
    """Shortest augmenting path assignment with row/column potentials.

    Returns ``col`` with row ``i`` assigned to column ``col[i]`` minimizing
    ``sum(cost[i, col[i]])``. Runs in O(m^3).
    """
    m = cost.shape[0]
    inf = np.inf
    u = np.zeros(m + 1)
    v = np.zeros(m + 1)
    row_of = np.zeros(m + 1, dtype=np.intp)  # 1-based row matched to column j; 0 = free
    way = np.zeros(m + 1, dtype=np.intp)
    for i in range(1, m + 1):
        row_of[0] = i
        j0 = 0
        minv = np.full(m + 1, inf)
        used = np.zeros(m + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of[j0]
            reduced = cost[i0 - 1] - u[i0] - v[1:]
            free = ~used[1:]
            better = free & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = j0
            candidates = np.where(free, minv[1:], inf)
            j1 = int(np.argmin(candidates)) + 1
            delta = candidates[j1 - 1]
            u[row_of[used]] += delta
            v[used] -= delta
            minv[~used] -= delta
            j0 = j1
            if row_of[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of[j0] = row_of[j1]
            j0 = j1
    col = np.empty(m, dtype=np.intp)
    col[row_of[1:] - 1] = np.arange(m)
    return col


def lap_max(C) -> tuple[np.ndarray, float]:
    """Maximize ``sum_i C[i, perm[i]]`` over permutations (exact, O(m^3))."""
    C = as_matrix(C, "C")
    if C.shape[0] != C.shape[1]:
        raise InvalidInputError(f"cost matrix must be square, got {C.shape}")
    perm = check_permutation(_solve_min_assignment(-C))
    return perm, float(C[np.arange(C.shape[0]), perm].sum())


def rank_one_lap_max(c, y_bar) -> tuple[np.ndarray, float]:
    """Maximize ``sum_i c[i] * y_bar[perm[i]]`` by the rearrangement inequality.

    Equivalent to :func:`lap_max` on ``C[i, j] = c[i] * y_bar[j]`` at
    O(m log m) cost.
    """
    c = as_vector(c, "c")
    y_bar = as_vector(y_bar, "y_bar")
    if c.shape != y_bar.shape:
        raise InvalidInputError("c and y_bar must have equal length")
    perm = check_permutation(_pair_sorted(c, y_bar))
    return perm, float(c @ y_bar[perm])


def match_1d(p, q) -> np.ndarray:
    """Permutation minimizing ``sum_i (p[perm[i]] - q[i])**2``."""
    p = as_vector(p, "p")
    q = as_vector(q, "q")
    if p.shape != q.shape:
        raise InvalidInputError("p and q must have equal length")
    return check_permutation(_pair_sorted(q, p))
