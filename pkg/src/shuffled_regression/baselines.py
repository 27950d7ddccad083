"""Reference solvers used to validate and benchmark the branch-and-bound engine."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .assignment import _pair_sorted, identity_permutation
from .bounds import UpperBoundResult, alternating_minimization
from .exceptions import InvalidInputError, ProblemSizeError
from .linalg import as_vector
from .problem import ProblemInstance, preprocess, recover_signal

MAX_ORACLE_M = 9
_CHUNK = 40320  # 8!


@dataclass(frozen=True)
class OracleResult:
    pi_star: np.ndarray
    f_star: float
    x_star: np.ndarray


def all_permutation_objectives(inst: ProblemInstance, prep=None):
    """Yield ``(perms, f_values)`` chunks covering every permutation in lexicographic order."""
    if inst.m > MAX_ORACLE_M:
        raise ProblemSizeError(f"exhaustive search is limited to m <= {MAX_ORACLE_M}, got m={inst.m}")
    prep = prep or preprocess(inst)
    it = itertools.permutations(range(inst.m))
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            return
        perms = np.array(chunk, dtype=np.intp)
        z = prep.y_bar[perms] @ prep.U
        yield perms, -np.einsum("ij,ij->i", z, z)


def brute_force(inst: ProblemInstance, tie_tol: float = 1e-14) -> OracleResult:
    """Exact minimizer by enumerating all ``m!`` permutations.

    Objective values within ``tie_tol`` of the minimum count as ties and the
    first one in lexicographic order wins.
    """
    prep = preprocess(inst)
    perms, values = zip(*all_permutation_objectives(inst, prep))
    values = np.concatenate(values)
    best = int(np.flatnonzero(values <= values.min() + tie_tol)[0])
    pi_star = np.concatenate(perms)[best]
    return OracleResult(pi_star, float(values[best]), recover_signal(pi_star, inst, prep))


def solve_1d(y, a) -> tuple[np.ndarray, float]:
    """Exact shuffled regression for a single regressor.

    For a fixed sign of the slope the best matching sorts ``y`` against
    ``a`` in the same (slope >= 0) or opposite (slope <= 0) order, so two
    sorted candidates cover every case.
    """
    y = as_vector(y, "y")
    a = as_vector(a, "a")
    if y.shape != a.shape:
        raise InvalidInputError("y and a must have equal length")
    aa = float(a @ a)
    if aa == 0.0:
        raise InvalidInputError("a must not be the zero vector")
    best = None
    for sources in (y, -y):
        perm = _pair_sorted(a, sources)
        py = y[perm]
        x = float(a @ py) / aa
        res = float(np.linalg.norm(py - a * x))
        if best is None or res < best[2]:
            best = (perm, x, res)
    return best[0], best[1]


def am_multistart(inst: ProblemInstance, restarts: int = 10, seed: int = 0, **am_kwargs) -> UpperBoundResult:
    """Alternating minimization from the identity and ``restarts`` random permutations.

    The best run wins; ties go to the earliest start.
    """
    if restarts < 1:
        raise InvalidInputError("restarts must be at least 1")
    prep = preprocess(inst)
    rng = np.random.default_rng(seed)
    starts = [identity_permutation(inst.m)] + [rng.permutation(inst.m) for _ in range(restarts)]
    best = None
    for start in starts:
        result = alternating_minimization(start, inst, prep, **am_kwargs)
        if best is None or result.value < best.value:
            best = result
    return best

