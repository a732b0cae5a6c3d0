"""Command-line experiment runner.

Subcommands ``learn``, ``noisy`` and ``verify`` each write one JSON report
(stdout unless ``--output``). Exit status is 0 when everything passed, 1
when an experiment failed and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__, _kernels
from .clifford import all_cliffords, random_clifford, to_matrix
from .densesim import distance
from .learner import RNG_NAME, LearnParams, learn_clifford, learn_clifford_noisy, make_rng
from .oracle import CLIFFORD_RADIUS, make_clifford_oracle, make_perturbed_clifford
from .pauli import DENSE_LIMIT
from .verify import VERIFY_MAX_N, run_all

SCHEMA_VERSION = "1.0"
THREADS_ENV = "CLIFFTOMO_THREADS"
# tableau text is embedded in learn reports up to this size
TEXT_LIMIT = 8


class UsageError(Exception):
    pass


def thread_count(requested: int | None) -> int:
    cap = os.environ.get(THREADS_ENV)
    n = requested or os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {cap!r}") from None
    return max(1, n)


def _parallel(fn, items, threads: int) -> list:
    # map keeps input order whatever the completion order
    if threads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _trial_seeds(seed: int, trials: int):
    return np.random.SeedSequence(seed).spawn(trials)


def _learn_trial(args):
    index, n, truth = args
    oracle = make_clifford_oracle(truth)
    report = learn_clifford(oracle)
    row = {
        "index": index,
        "success": bool(report.recovered == truth),
        "queries": oracle.queries,
        "expected_queries": 4 * n + 3,
    }
    if n <= TEXT_LIMIT:
        row["truth"] = truth.to_text()
        row["recovered"] = report.recovered.to_text()
    return row


def cmd_learn(args) -> tuple[dict, bool]:
    n = args.n
    if n < 1:
        raise UsageError("--n must be at least 1")
    if args.exhaustive:
        if n > 2:
            raise UsageError("--exhaustive enumerates all Cliffords and supports n <= 2")
        truths = list(all_cliffords(n))
    else:
        if args.trials < 1:
            raise UsageError("--trials must be at least 1")
        truths = [random_clifford(n, make_rng(ss)) for ss in _trial_seeds(args.seed, args.trials)]
    rows = _parallel(_learn_trial, [(i, n, t) for i, t in enumerate(truths)], args.threads)
    successes = sum(r["success"] for r in rows)
    exact = all(r["queries"] == 4 * n + 3 for r in rows)
    aggregate = {
        "trials": len(rows),
        "successes": successes,
        "success_rate": successes / len(rows),
        "queries_per_trial": 4 * n + 3,
        "query_count_exact": exact,
        "passed": successes == len(rows) and exact,
    }
    config = {"n": n, "trials": len(rows), "exhaustive": bool(args.exhaustive)}
    return _report("learn", config, args.seed, rows, aggregate), aggregate["passed"]


def _noisy_trial(args):
    index, n, eps, params, seed = args
    plant_seed, learn_seed = seed.spawn(2)
    rng = make_rng(plant_seed)
    truth = random_clifford(n, rng)
    oracle, u = make_perturbed_clifford(truth, eps, rng)
    report = learn_clifford_noisy(oracle, params, learn_seed)
    row = {
        "index": index,
        "completed": report.success,
        "success": bool(report.success and report.recovered == truth),
        "queries": report.queries,
        "oracle_distance": distance(u, to_matrix(truth)),
        "unanimous": report.unanimous,
        "failure": report.failure,
    }
    if report.success:
        row["recovered_distance"] = distance(u, to_matrix(report.recovered))
    return row


def success_threshold(delta: float, trials: int) -> float:
    """``1 - delta`` minus three binomial standard deviations."""
    return 1 - delta - 3 * math.sqrt(delta * (1 - delta) / trials)


def cmd_noisy(args) -> tuple[dict, bool]:
    n, eps, delta = args.n, args.eps, args.delta
    if not 1 <= n <= DENSE_LIMIT:
        raise UsageError(f"--n must lie in [1, {DENSE_LIMIT}] for the dense backend")
    if not 0 <= eps < CLIFFORD_RADIUS:
        raise UsageError(f"--eps must lie in [0, {CLIFFORD_RADIUS:.6f})")
    if not 0 < delta < 1:
        raise UsageError("--delta must lie in (0, 1)")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    params = LearnParams(eps, delta)
    n1, n2 = params.stage_sizes(n)
    predicted = params.predicted_queries(n)
    items = [(i, n, eps, params, ss) for i, ss in enumerate(_trial_seeds(args.seed, args.trials))]
    rows = _parallel(_noisy_trial, items, args.threads)
    successes = sum(r["success"] for r in rows)
    rate = successes / len(rows)
    threshold = success_threshold(delta, len(rows))
    exact = all(r["queries"] == predicted for r in rows)
    aggregate = {
        "trials": len(rows),
        "successes": successes,
        "success_rate": rate,
        "success_threshold": threshold,
        "n1": n1,
        "n2": n2,
        "predicted_queries": predicted,
        "query_count_exact": exact,
        "queries_total": sum(r["queries"] for r in rows),
        "unanimous_trials": sum(r["unanimous"] for r in rows),
        "passed": rate >= threshold and exact,
    }
    config = {"n": n, "eps": eps, "delta": delta, "trials": len(rows)}
    return _report("noisy", config, args.seed, rows, aggregate), aggregate["passed"]


def cmd_verify(args) -> tuple[dict, bool]:
    if not 1 <= args.n <= VERIFY_MAX_N:
        raise UsageError(f"--n must lie in [1, {VERIFY_MAX_N}] for verify")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    results = run_all(args.n, args.trials, make_rng(args.seed), corrupt_sign=args.corrupt_sign)
    rows = [dict(r.as_dict(), index=i) for i, r in enumerate(results)]
    passed = all(r.passed for r in results)
    aggregate = {"checks": len(rows), "failed": [r.name for r in results if not r.passed], "passed": passed}
    config = {"n": args.n, "trials": args.trials, "corrupt_sign": bool(args.corrupt_sign)}
    return _report("verify", config, args.seed, rows, aggregate), passed


def _report(command, config, seed, rows, aggregate) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "seed": seed,
        "rng": RNG_NAME,
        "versions": {
            "clifftomo": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
            "kernels": _kernels.BACKEND,
        },
        "per_trial": rows,
        "aggregate": aggregate,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_csv(path: str, rows: list[dict]):
    fields = sorted({k for r in rows for k, v in r.items() if not isinstance(v, (dict, list))})
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clifftomo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
    common.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="also write per-trial rows as CSV")
    common.add_argument("--no-timestamp", action="store_true", help="omit the generation time")
    common.add_argument("--threads", type=int, help=f"worker threads (capped by ${THREADS_ENV})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", parents=[common], help="exact learner on random Clifford oracles")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--exhaustive", action="store_true", help="every Clifford on n <= 2 qubits")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("noisy", parents=[common], help="closest-Clifford learner on perturbed oracles")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_noisy)

    p = sub.add_parser("verify", parents=[common], help="dense cross-checks of the tableau machinery")
    p.add_argument("--n", type=int, default=VERIFY_MAX_N)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--corrupt-sign", action="store_true", help="flip a sign bit to test the harness")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be at least 1")
        args.threads = thread_count(args.threads)
        report, passed = args.func(args)
    except UsageError as exc:
        print(f"clifftomo {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if not args.no_timestamp:
        report["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    text = dumps(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        write_csv(args.csv, report["per_trial"])
    agg = report["aggregate"]
    print(f"{args.command}: {'PASS' if passed else 'FAIL'} {json.dumps(agg, sort_keys=True)}", file=sys.stderr)
    return 0 if passed else 1
