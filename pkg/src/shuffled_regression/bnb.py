"""Best-first branch-and-bound over the initial search rectangle.

Nodes are boxes in the search coordinates ``z``. Each box is bounded below
by the convex-envelope assignment bound; the optimal assignment of every
bound doubles as a candidate permutation, optionally polished by
alternating minimization. A box is discarded once its bound reaches
``incumbent - delta``; the search ends when no open box can improve on the
incumbent by more than ``delta``.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .assignment import identity_permutation
from .bounds import BOUND_BACKENDS, RANK_ONE, alternating_minimization, lower_bound
from .exceptions import DegenerateSplitError, InvalidInputError
from .linalg import DEFAULT_RANK_TOL
from .problem import (
    Preprocessed,
    ProblemInstance,
    Rectangle,
    initial_rectangle,
    preprocess,
    recover_signal,
)

logger = logging.getLogger(__name__)

MIN_SPLIT_WIDTH = 1e-14

OPTIMAL = "optimal"
NODE_LIMIT = "node-limit"
TIME_LIMIT = "time-limit"


@dataclass
class BnbConfig:
    delta: float = 1e-6
    max_nodes: int = 10**7
    time_limit: Optional[float] = None
    am_on_improvement_only: bool = True
    bound_backend: str = RANK_ONE
    parallel_children: bool = False
    am_max_iters: int = 100
    am_rel_tol: float = 1e-9
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if not self.delta > 0:
            raise InvalidInputError(f"delta must be positive, got {self.delta}")
        if self.max_nodes < 1:
            raise InvalidInputError("max_nodes must be at least 1")
        if self.time_limit is not None and not self.time_limit > 0:
            raise InvalidInputError("time_limit must be positive")
        if self.bound_backend not in BOUND_BACKENDS:
            raise InvalidInputError(f"bound_backend must be one of {BOUND_BACKENDS}")


@dataclass
class SearchStats:
    nodes_explored: int = 0
    nodes_pruned: int = 0
    am_calls: int = 0
    wall_time: float = 0.0
    max_depth: int = 0


@dataclass(frozen=True)
class BnbNode:
    rect: Rectangle
    bound: float
    witness: np.ndarray
    depth: int


@dataclass
class Solution:
    pi_hat: np.ndarray
    x_hat: np.ndarray
    f_value: float
    residual: float
    gap: float
    status: str
    stats: SearchStats = field(default_factory=SearchStats)


def bisect(rect: Rectangle) -> tuple[Rectangle, Rectangle]:
    """Split the widest coordinate (lowest index on ties) at its midpoint."""
    widths = rect.widths
    i = int(np.argmax(widths))
    if widths[i] <= MIN_SPLIT_WIDTH:
        raise DegenerateSplitError("every coordinate of the rectangle is degenerate")
    mid = 0.5 * (rect.l[i] + rect.u[i])
    left_u = rect.u.copy()
    left_u[i] = mid
    right_l = rect.l.copy()
    right_l[i] = mid
    return Rectangle(rect.l, left_u), Rectangle(right_l, rect.u)


class _Search:
    """Mutable search state owned by a single :func:`solve` call."""

    def __init__(self, inst, prep, config, on_event):
        self.inst = inst
        self.prep = prep
        self.config = config
        self.on_event = on_event
        self.stats = SearchStats()
        self.best_perm: np.ndarray | None = None
        self.best_value = np.inf
        self._refined: set[int] = set()

    def _emit(self, kind, node):
        if self.on_event is not None:
            self.on_event(kind, node, self.best_value)

    def _offer(self, perm: np.ndarray, value: float):
        if value < self.best_value:
            self.best_perm, self.best_value = perm, value
            self._emit("incumbent", None)

    def consider(self, witness: np.ndarray):
        z = self.prep.z_of(witness)
        value = -float(z @ z)
        improves = value < self.best_value
        self._offer(witness, value)
        if self.config.am_on_improvement_only and not improves:
            return
        key = hash(witness.tobytes())
        if key in self._refined:
            return
        self._refined.add(key)
        self.stats.am_calls += 1
        result = alternating_minimization(
            witness, self.inst, self.prep, self.config.am_max_iters, self.config.am_rel_tol
        )
        self._offer(result.pi, result.value)

    def make_node(self, rect: Rectangle, depth: int) -> BnbNode:
        lb = lower_bound(rect, self.prep, self.config.bound_backend)
        return BnbNode(rect, lb.bound, lb.witness, depth)


def solve(
    inst: ProblemInstance,
    config: BnbConfig | None = None,
    on_event: Callable[[str, Optional[BnbNode], float], None] | None = None,
) -> Solution:
    """Globally minimize the shuffled least-squares residual to within ``delta``.

    ``on_event(kind, node, incumbent)`` is called with ``kind`` one of
    ``"explore"`` (a node is about to be split), ``"prune"`` (a node is
    discarded) and ``"incumbent"`` (a better permutation was found; ``node``
    is None).
    """
    config = config or BnbConfig()
    start = time.perf_counter()
    prep = preprocess(inst, config.rank_tol)

    if inst.m == 1:
        perm = identity_permutation(1)
        stats = SearchStats(wall_time=time.perf_counter() - start)
        return _finish(perm, inst, prep, 0.0, OPTIMAL, stats)

    search = _Search(inst, prep, config, on_event)
    root = search.make_node(initial_rectangle(prep), 0)
    search.consider(root.witness)

    counter = itertools.count()
    heap = [(root.bound, next(counter), root)]
    closed_min = np.inf
    status = OPTIMAL
    executor = ThreadPoolExecutor(max_workers=2) if config.parallel_children else None

    def prune(node):
        nonlocal closed_min
        search.stats.nodes_pruned += 1
        closed_min = min(closed_min, node.bound)
        search._emit("prune", node)

    try:
        while heap:
            if search.stats.nodes_explored >= config.max_nodes:
                status = NODE_LIMIT
                break
            if config.time_limit is not None and time.perf_counter() - start > config.time_limit:
                status = TIME_LIMIT
                break

            bound, _, node = heapq.heappop(heap)
            if bound >= search.best_value - config.delta:
                # best-first: every remaining open node is at least as bad
                prune(node)
                break

            search._emit("explore", node)
            search.stats.nodes_explored += 1
            try:
                rects = bisect(node.rect)
            except DegenerateSplitError:
                # a point box: g at its centre bounds the (at most one point) region
                z0 = node.rect.l
                prune(BnbNode(node.rect, max(node.bound, -float(z0 @ z0)), node.witness, node.depth))
                continue

            depth = node.depth + 1
            search.stats.max_depth = max(search.stats.max_depth, depth)
            if executor is not None:
                children = list(executor.map(lambda r: search.make_node(r, depth), rects))
            else:
                children = [search.make_node(r, depth) for r in rects]
            for child in children:
                search.consider(child.witness)
            for child in children:
                if child.bound >= search.best_value - config.delta:
                    prune(child)
                else:
                    heapq.heappush(heap, (child.bound, next(counter), child))
    finally:
        if executor is not None:
            executor.shutdown()

    open_min = heap[0][0] if heap else np.inf
    gap = max(0.0, search.best_value - min(open_min, closed_min))
    if status == OPTIMAL and gap > config.delta:
        # only reachable through unsplittable point boxes
        status = NODE_LIMIT
    search.stats.wall_time = time.perf_counter() - start
    logger.debug(
        "bnb finished: status=%s f=%.12g gap=%.3g nodes=%d",
        status, search.best_value, gap, search.stats.nodes_explored,
    )
    return _finish(search.best_perm, inst, prep, gap, status, search.stats)


def _finish(perm, inst: ProblemInstance, prep: Preprocessed, gap, status, stats) -> Solution:
    x_hat = recover_signal(perm, inst, prep)
    z = prep.z_of(perm)
    return Solution(
        pi_hat=perm,
        x_hat=x_hat,
        f_value=-float(z @ z),
        residual=float(np.linalg.norm(inst.y[perm] - inst.A @ x_hat)),
        gap=float(gap),
        status=status,
        stats=stats,
    )
