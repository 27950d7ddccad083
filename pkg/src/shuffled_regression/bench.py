"""Seeded benchmark sweeps over synthetic instances, written as CSV.

A sweep is described by a JSON object, for example::

    {"m": [100], "n": [3], "alpha": [1.0], "snr_db": [10, 20, 30, 40, "inf"],
     "trials": 10, "methods": ["ccvmin", "am"], "delta": 1e-6,
     "time_limit": 600, "max_nodes": 10000000, "seed": 0}

Every combination of ``m``, ``n``, ``alpha`` and ``snr_db`` is a cell; each
cell runs ``trials`` instances and every method on each instance. The
instance seed depends only on ``(seed, m, n, trial)``, so cells that differ
only in ``alpha`` or ``snr_db`` share the design, signal and noise draws.
"""
from __future__ import annotations

import csv
import itertools
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO

import numpy as np

from .baselines import MAX_ORACLE_M, am_multistart, brute_force, solve_1d
from .bnb import BnbConfig, solve
from .data import SyntheticSpec, generate
from .exceptions import ConfigError
from .metrics import relative_error, residual_error
from .problem import objective_f, preprocess, recover_signal

logger = logging.getLogger(__name__)

COLUMNS = [
    "m", "n", "alpha", "snr_db", "seed", "method", "rel_error", "residual_error",
    "f_value", "gap", "status", "nodes_explored", "wall_time_s",
]
METHODS = ("ccvmin", "am", "oracle", "solve1d")


@dataclass
class BenchConfig:
    m: list = field(default_factory=list)
    n: list = field(default_factory=list)
    alpha: list = field(default_factory=lambda: [1.0])
    snr_db: list = field(default_factory=lambda: [math.inf])
    trials: int = 1
    methods: list = field(default_factory=lambda: ["ccvmin"])
    delta: float = 1e-6
    time_limit: Optional[float] = None
    max_nodes: int = 10**7
    seed: int = 0
    am_restarts: int = 10
    record_time: bool = True
    workers: int = 1


def _parse_snr(value, where):
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if isinstance(value, (int, float)) and not isinstance(value, bool) and not math.isnan(value):
        return float(value)
    raise ConfigError(f"{where}: expected a number or \"inf\", got {value!r}")


def _int_list(doc, key, minimum):
    values = doc.get(key, [])
    if not isinstance(values, list):
        raise ConfigError(f"field {key!r}: expected a list")
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
            raise ConfigError(f"field {key!r}[{i}]: expected an integer >= {minimum}, got {v!r}")
    return list(values)


def parse_bench_config(doc) -> BenchConfig:
    if not isinstance(doc, dict):
        raise ConfigError("bench config must be a JSON object")
    unknown = set(doc) - set(BenchConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(sorted(unknown))}")
    cfg = BenchConfig()
    cfg.m = _int_list(doc, "m", 1)
    cfg.n = _int_list(doc, "n", 1)

    alpha = doc.get("alpha", cfg.alpha)
    if not isinstance(alpha, list):
        raise ConfigError("field 'alpha': expected a list")
    for i, a in enumerate(alpha):
        if isinstance(a, bool) or not isinstance(a, (int, float)) or not 0.0 <= a <= 1.0:
            raise ConfigError(f"field 'alpha'[{i}]: expected a number in [0, 1], got {a!r}")
    cfg.alpha = [float(a) for a in alpha]

    snr = doc.get("snr_db", ["inf"])
    if not isinstance(snr, list):
        raise ConfigError("field 'snr_db': expected a list")
    cfg.snr_db = [_parse_snr(v, f"field 'snr_db'[{i}]") for i, v in enumerate(snr)]

    methods = doc.get("methods", cfg.methods)
    if not isinstance(methods, list) or any(m not in METHODS for m in methods):
        raise ConfigError(f"field 'methods': expected a list drawn from {METHODS}, got {methods!r}")
    cfg.methods = list(methods)

    for key, kind, minimum in (("trials", int, 0), ("max_nodes", int, 1), ("seed", int, 0),
                               ("am_restarts", int, 1), ("workers", int, 1)):
        if key in doc:
            v = doc[key]
            if isinstance(v, bool) or not isinstance(v, kind) or v < minimum:
                raise ConfigError(f"field {key!r}: expected an integer >= {minimum}, got {v!r}")
            setattr(cfg, key, v)
    if "delta" in doc:
        v = doc["delta"]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"field 'delta': expected a positive number, got {v!r}")
        cfg.delta = float(v)
    if doc.get("time_limit") is not None:
        v = doc["time_limit"]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"field 'time_limit': expected a positive number or null, got {v!r}")
        cfg.time_limit = float(v)
    if "record_time" in doc:
        if not isinstance(doc["record_time"], bool):
            raise ConfigError("field 'record_time': expected true or false")
        cfg.record_time = doc["record_time"]

    for m, n in itertools.product(cfg.m, cfg.n):
        if m < n:
            raise ConfigError(f"fields 'm'/'n': cell m={m}, n={n} violates m >= n")
    return cfg


def load_bench_config(path) -> BenchConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_bench_config(doc)


def trial_seed(base: int, m: int, n: int, trial: int) -> int:
    seq = np.random.SeedSequence(base, spawn_key=(m, n, trial))
    return int(seq.generate_state(1)[0])


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".12g")
    return str(value)


def _run_method(method, inst, truth, cfg: BenchConfig, seed: int) -> dict:
    row = {"rel_error": None, "residual_error": None, "f_value": None, "gap": None,
           "status": None, "nodes_explored": None}
    x = None
    if method == "ccvmin":
        sol = solve(inst, BnbConfig(delta=cfg.delta, max_nodes=cfg.max_nodes, time_limit=cfg.time_limit))
        x = sol.x_hat
        row.update(f_value=sol.f_value, gap=sol.gap, status=sol.status,
                   nodes_explored=sol.stats.nodes_explored)
    elif method == "am":
        result = am_multistart(inst, cfg.am_restarts, seed)
        x = recover_signal(result.pi, inst, preprocess(inst))
        row.update(f_value=result.value, status="heuristic")
    elif method == "oracle":
        if inst.m > MAX_ORACLE_M:
            row["status"] = "skipped"
            return row
        oracle = brute_force(inst)
        x = oracle.x_star
        row.update(f_value=oracle.f_star, gap=0.0, status="optimal")
    elif method == "solve1d":
        if inst.n != 1:
            row["status"] = "skipped"
            return row
        perm, slope = solve_1d(inst.y, inst.A[:, 0])
        x = np.array([slope])
        row.update(f_value=objective_f(perm, preprocess(inst)), gap=0.0, status="optimal")
    row["rel_error"] = relative_error(x, truth.x_star)
    row["residual_error"] = residual_error(x, inst)
    return row


def _run_trial(task) -> list[dict]:
    cfg, (m, n, alpha, snr_db), trial = task
    seed = trial_seed(cfg.seed, m, n, trial)
    inst, truth = generate(SyntheticSpec(m, n, alpha, snr_db, seed))
    rows = []
    for method in cfg.methods:
        start = time.perf_counter()
        try:
            row = _run_method(method, inst, truth, cfg, seed)
        except Exception as exc:  # a failing trial must not abort the sweep
            logger.warning("m=%d n=%d trial=%d method=%s failed: %s", m, n, trial, method, exc)
            row = {"status": "error"}
        elapsed = time.perf_counter() - start
        row.update(m=m, n=n, alpha=alpha, snr_db=snr_db, seed=seed, method=method,
                   wall_time_s=elapsed if cfg.record_time else None)
        rows.append(row)
    return rows


def run_bench(cfg: BenchConfig, out: TextIO) -> int:
    """Run the sweep, streaming rows to ``out``; returns the number of rows."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    cells = list(itertools.product(cfg.m, cfg.n, cfg.alpha, cfg.snr_db))
    tasks = [(cfg, cell, trial) for cell in cells for trial in range(cfg.trials)]
    count = 0
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            batches = pool.map(_run_trial, tasks)
            for rows in batches:
                count += _write_rows(writer, rows, out)
    else:
        for task in tasks:
            count += _write_rows(writer, _run_trial(task), out)
    return count


def _write_rows(writer, rows, out) -> int:
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in COLUMNS])
    out.flush()
    return len(rows)
