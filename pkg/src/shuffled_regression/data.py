"""Synthetic instance generation and the JSON instance document.

Instance documents look like::

    {"m": 3, "n": 1, "A": [[1.0], [2.0], [3.0]], "y": [4.0, 2.0, 6.0],
     "ground_truth": {"x_star": [2.0], "pi_star": [1, 0, 2], "sigma": 0.0}}

``ground_truth`` is optional. Floats are written with ``repr`` precision so
they round-trip exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .assignment import check_permutation
from .exceptions import InvalidInputError
from .problem import ProblemInstance


@dataclass(frozen=True)
class SyntheticSpec:
    m: int
    n: int
    alpha: float = 1.0
    snr_db: float = math.inf
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidInputError(f"shuffle fraction must lie in [0, 1], got {self.alpha}")
        if self.n < 1 or self.m < self.n:
            raise InvalidInputError(f"need m >= n >= 1, got m={self.m}, n={self.n}")
        if math.isnan(self.snr_db):
            raise InvalidInputError("snr_db must not be NaN")


@dataclass(frozen=True)
class GroundTruth:
    x_star: np.ndarray
    pi_star: np.ndarray
    sigma: float


def noise_sigma(clean, snr_db: float) -> float:
    """Noise level with ``10 log10(||clean||^2 / (m sigma^2)) == snr_db``."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    clean = np.asarray(clean)
    return float(np.linalg.norm(clean) * 10.0 ** (-snr_db / 20.0) / math.sqrt(clean.shape[0]))


def generate(spec: SyntheticSpec) -> tuple[ProblemInstance, GroundTruth]:
    """Gaussian design and signal, a partial shuffle, then additive Gaussian noise.

    ``floor(alpha * m)`` positions are drawn without replacement and permuted
    among themselves uniformly at random (fixed points allowed). Random
    draws happen in a fixed order so the same seed gives the same instance
    regardless of ``alpha`` and ``snr_db``.
    """
    rng = np.random.default_rng(spec.seed)
    m, n = spec.m, spec.n
    A = rng.standard_normal((m, n))
    x_star = rng.standard_normal(n)
    k = math.floor(spec.alpha * m + 1e-9)
    chosen = rng.choice(m, size=k, replace=False)
    perm = np.arange(m, dtype=np.intp)
    perm[chosen] = chosen[rng.permutation(k)]
    noise = rng.standard_normal(m)

    clean = A @ x_star
    sigma = noise_sigma(clean, spec.snr_db)
    y = clean[perm] + sigma * noise
    return ProblemInstance(A, y), GroundTruth(x_star, perm, sigma)


def instance_to_dict(inst: ProblemInstance, truth: Optional[GroundTruth] = None) -> dict:
    doc = {"m": inst.m, "n": inst.n, "A": inst.A.tolist(), "y": inst.y.tolist()}
    if truth is not None:
        doc["ground_truth"] = {
            "x_star": truth.x_star.tolist(),
            "pi_star": truth.pi_star.tolist(),
            "sigma": truth.sigma,
        }
    return doc


def instance_from_dict(doc: dict) -> tuple[ProblemInstance, Optional[GroundTruth]]:
    try:
        A = np.array(doc["A"], dtype=float)
        y = np.array(doc["y"], dtype=float)
        m, n = int(doc["m"]), int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed instance document: {exc}") from exc
    if A.shape != (m, n):
        raise InvalidInputError(f"A has shape {A.shape}, document declares ({m}, {n})")
    inst = ProblemInstance(A, y)
    truth = None
    if doc.get("ground_truth") is not None:
        gt = doc["ground_truth"]
        try:
            truth = GroundTruth(
                np.array(gt["x_star"], dtype=float),
                check_permutation(np.array(gt["pi_star"], dtype=np.intp), m),
                float(gt.get("sigma", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed ground_truth: {exc}") from exc
    return inst, truth


def save_instance(path, inst: ProblemInstance, truth: Optional[GroundTruth] = None) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst, truth)) + "\n", encoding="utf-8")


def load_instance(path) -> tuple[ProblemInstance, Optional[GroundTruth]]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InvalidInputError(f"{path}: expected a JSON object")
    return instance_from_dict(doc)
