"""Linear regression without correspondences.

Recovers ``x`` from ``y = P A x + noise`` with an unknown row permutation
``P`` by globally minimizing the shuffled least-squares residual with a
concave-minimization branch-and-bound.
"""
from .assignment import lap_max, match_1d, rank_one_lap_max
from .baselines import am_multistart, brute_force, solve_1d
from .bnb import BnbConfig, Solution, bisect, solve
from .bounds import alternating_minimization, envelope_value, lower_bound
from .data import GroundTruth, SyntheticSpec, generate, load_instance, save_instance
from .exceptions import (
    ConfigError,
    DegenerateSplitError,
    InvalidInputError,
    ProblemSizeError,
    RankError,
)
from .linalg import kron_singular_basis, least_squares, thin_svd
from .metrics import relative_error, residual_error
from .problem import (
    Preprocessed,
    ProblemInstance,
    Rectangle,
    initial_rectangle,
    objective_f,
    preprocess,
    recover_signal,
)

__version__ = "0.1.0"
