"""Accuracy metrics for estimated signals."""
from __future__ import annotations

import numpy as np

from .assignment import match_1d
from .exceptions import InvalidInputError
from .linalg import as_vector
from .problem import ProblemInstance


def relative_error(x_bar, x_star) -> float:
    x_bar = as_vector(x_bar, "x_bar")
    x_star = as_vector(x_star, "x_star")
    if x_bar.shape != x_star.shape:
        raise InvalidInputError("x_bar and x_star must have equal length")
    scale = np.linalg.norm(x_star)
    if scale == 0.0:
        raise InvalidInputError("x_star must not be the zero vector")
    return float(np.linalg.norm(x_bar - x_star) / scale)


def residual_error(x_bar, inst: ProblemInstance) -> float:
    """``min_P ||P y - A x_bar|| / (m ||y||)``, solved exactly by sorting."""
    fitted = inst.A @ as_vector(x_bar, "x_bar")
    perm = match_1d(inst.y, fitted)
    return float(np.linalg.norm(inst.y[perm] - fitted) / (inst.m * np.linalg.norm(inst.y)))
