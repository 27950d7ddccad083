"""Command line entry point: ``gen``, ``solve`` and ``bench``.

Exit status is 0 on success, 1 on invalid input and 2 when a solve stopped
at its node or time limit.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .baselines import am_multistart, brute_force, solve_1d
from .bench import load_bench_config, run_bench
from .bnb import OPTIMAL, BnbConfig, solve
from .data import SyntheticSpec, generate, load_instance, save_instance
from .exceptions import ConfigError, InvalidInputError
from .metrics import relative_error, residual_error
from .problem import objective_f, preprocess, recover_signal

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_LIMIT = 2


def _snr(text: str) -> float:
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shuffled-regression",
        description="Linear regression without correspondences by concave-minimization branch-and-bound.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic instance")
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--alpha", type=float, default=1.0, help="fraction of shuffled entries")
    gen.add_argument("--snr-db", type=_snr, default=math.inf, help="SNR in dB, or 'inf'")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, required=True)

    sol = sub.add_parser("solve", help="solve an instance file")
    sol.add_argument("--instance", type=Path, required=True)
    sol.add_argument("--method", choices=["ccvmin", "am", "oracle", "solve1d"], default="ccvmin")
    sol.add_argument("--delta", type=float, default=1e-6)
    sol.add_argument("--time-limit", type=float, default=None, help="seconds")
    sol.add_argument("--max-nodes", type=int, default=10**7)
    sol.add_argument("--restarts", type=int, default=10, help="random starts for --method am")
    sol.add_argument("--seed", type=int, default=0, help="RNG seed for --method am")
    sol.add_argument("--out", type=Path, default=None, help="solution JSON (default: stdout)")

    bench = sub.add_parser("bench", help="run a benchmark sweep")
    bench.add_argument("--config", type=Path, required=True)
    bench.add_argument("--out", type=Path, default=None, help="CSV output (default: stdout)")
    return parser


def _cmd_gen(args) -> int:
    inst, truth = generate(SyntheticSpec(args.m, args.n, args.alpha, args.snr_db, args.seed))
    save_instance(args.out, inst, truth)
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst, truth = load_instance(args.instance)
    doc = {"method": args.method}
    exit_code = EXIT_OK
    if args.method == "ccvmin":
        sol = solve(inst, BnbConfig(delta=args.delta, max_nodes=args.max_nodes, time_limit=args.time_limit))
        perm, x = sol.pi_hat, sol.x_hat
        doc.update(status=sol.status, f_value=sol.f_value, gap=sol.gap,
                   stats=vars(sol.stats))
        if sol.status != OPTIMAL:
            exit_code = EXIT_LIMIT
    elif args.method == "am":
        result = am_multistart(inst, args.restarts, args.seed)
        perm = result.pi
        x = recover_signal(perm, inst, preprocess(inst))
        doc.update(status="heuristic", f_value=result.value)
    elif args.method == "oracle":
        oracle = brute_force(inst)
        perm, x = oracle.pi_star, oracle.x_star
        doc.update(status=OPTIMAL, f_value=oracle.f_star, gap=0.0)
    else:
        if inst.n != 1:
            raise InvalidInputError("solve1d needs an instance with n = 1")
        perm, slope = solve_1d(inst.y, inst.A[:, 0])
        x = np.array([slope])
        doc.update(status=OPTIMAL, f_value=objective_f(perm, preprocess(inst)), gap=0.0)

    doc["pi_hat"] = [int(i) for i in perm]
    doc["x_hat"] = x.tolist()
    doc["residual"] = float(np.linalg.norm(inst.y[perm] - inst.A @ x))
    doc["residual_error"] = residual_error(x, inst)
    if truth is not None:
        doc["rel_error"] = relative_error(x, truth.x_star)

    text = json.dumps(doc, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return exit_code


def _cmd_bench(args) -> int:
    cfg = load_bench_config(args.config)
    if args.out is None:
        run_bench(cfg, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            run_bench(cfg, fh)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"gen": _cmd_gen, "solve": _cmd_solve, "bench": _cmd_bench}
    try:
        return handlers[args.command](args)
    except (InvalidInputError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
