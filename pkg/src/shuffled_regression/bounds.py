"""Lower and upper bounds on the permutation objective.

Lower bounds minimize the convex envelope of ``g(z) = -sum(z**2)`` over a
box. The envelope is affine, so minimizing it over the image of the
Birkhoff polytope is a linear assignment problem whose cost
``C[i, j] = c[i] * y_bar[j]`` has rank one. Upper bounds come from
alternating minimization seeded with the assignment's optimal permutation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import _pair_sorted, check_permutation, lap_max
from .exceptions import InvalidInputError
from .problem import Preprocessed, ProblemInstance, Rectangle

RANK_ONE = "rank-one-sort"
GENERAL_LAP = "general-lap"
BOUND_BACKENDS = (RANK_ONE, GENERAL_LAP)


@dataclass(frozen=True)
class LowerBoundResult:
    bound: float
    witness: np.ndarray
    assignment_value: float


@dataclass(frozen=True)
class UpperBoundResult:
    pi: np.ndarray
    value: float
    iterations: int
    residuals: list[float] = field(default_factory=list, repr=False)


def envelope_value(rect: Rectangle, z) -> float:
    """Convex envelope of ``-sum(z**2)`` over ``rect``, evaluated at ``z``."""
    z = np.asarray(z, dtype=float)
    if z.shape != rect.l.shape:
        raise InvalidInputError(f"z has shape {z.shape}, rectangle has dimension {rect.l.shape[0]}")
    return float(rect.l @ rect.u - (rect.l + rect.u) @ z)


def lower_bound(rect: Rectangle, prep: Preprocessed, backend: str = RANK_ONE) -> LowerBoundResult:
    """Lower bound of the objective over all doubly stochastic points in ``rect``.

    The box constraint is dropped from the assignment step, so the bound is
    valid for any ``rect`` but tight only for small boxes around feasible
    points.
    """
    c = prep.U @ (rect.l + rect.u)
    if backend == RANK_ONE:
        # stable argsort; ties in c only reorder equally good pairings
        order_c = np.argsort(c, kind="stable")
        witness = np.empty_like(order_c)
        witness[order_c] = prep.y_order
        value = float(c[order_c] @ prep.y_sorted)
    elif backend == GENERAL_LAP:
        witness, value = lap_max(np.outer(c, prep.y_bar))
    else:
        raise InvalidInputError(f"unknown bound backend {backend!r}; choose from {BOUND_BACKENDS}")
    return LowerBoundResult(float(rect.l @ rect.u) - value, witness, value)


def _residual(py: np.ndarray, U: np.ndarray) -> tuple[float, np.ndarray]:
    fitted = U @ (U.T @ py)
    return float(np.linalg.norm(py - fitted)), fitted


def alternating_minimization(
    pi0,
    inst: ProblemInstance,
    prep: Preprocessed,
    max_iters: int = 100,
    rel_tol: float = 1e-9,
) -> UpperBoundResult:
    """Block descent on ``||P y - A x||`` alternating the signal and the permutation.

    The signal step is minimum-norm least squares (``A x = U U^T P y``); the
    permutation step sorts ``y`` against the fitted values. Stops once the
    residual improves by less than ``rel_tol`` relatively.
    """
    perm = check_permutation(pi0, inst.m)
    y, U = inst.y, prep.U
    res, fitted = _residual(y[perm], U)
    residuals = [res]
    iterations = 0
    for iterations in range(1, max_iters + 1):
        candidate = _pair_sorted(fitted, y)
        new_res, new_fitted = _residual(y[candidate], U)
        if new_res > res:
            break
        previous = res
        perm, res, fitted = candidate, new_res, new_fitted
        residuals.append(res)
        if previous - res <= rel_tol * previous:
            break
    z = prep.z_of(perm)
    return UpperBoundResult(perm, -float(z @ z), iterations, residuals)
