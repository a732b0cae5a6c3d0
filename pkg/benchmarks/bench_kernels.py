"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each case is timed on both backends with the same inputs; the table shows
the best-of-``repeat`` time per call and the speedup.
"""

from __future__ import annotations

import argparse
import json
import platform
import time

import numpy as np

from clifftomo import _kernels
from clifftomo.clifford import compile, random_clifford
from clifftomo.f2la import pack_rows
from clifftomo.learner import learn_clifford, make_rng
from clifftomo.oracle import make_clifford_oracle


def _bits(rng, rows, cols):
    return pack_rows(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8), cols)


def case_mat_mul(n):
    rng = np.random.default_rng(n)
    a, b = _bits(rng, n, n), _bits(rng, n, n)
    return lambda: _kernels.mat_mul(a, b, n)


def case_row_reduce(n):
    rng = np.random.default_rng(n)
    m = _bits(rng, n, n)
    signs = rng.integers(0, 2, size=n, dtype=np.uint8)
    return lambda: _kernels.row_reduce_signed(m.copy(), signs.copy(), n)


def case_gate_program(n):
    rng = np.random.default_rng(n)
    z, x = _bits(rng, 2 * n, 2 * n), _bits(rng, 2 * n, 2 * n)
    ph = np.zeros(2 * n, dtype=np.uint8)
    prog = compile(random_clifford(n, rng)).program

    def run():
        _kernels.rows_program(z.copy(), x.copy(), ph.copy(), prog)

    return run


def case_conjugate(n):
    rng = np.random.default_rng(n)
    t = random_clifford(n, rng)
    z, x = _bits(rng, 2 * n, 2 * n), _bits(rng, 2 * n, 2 * n)
    ph = np.zeros(2 * n, dtype=np.uint8)
    return lambda: _kernels.rows_conjugate(z.copy(), x.copy(), ph.copy(), n, n, *t.rows)


def case_learn(n):
    t = random_clifford(n, make_rng(n))
    return lambda: learn_clifford(make_clifford_oracle(t))


CASES = [
    ("mat_mul", case_mat_mul, (64, 256)),
    ("row_reduce_signed", case_row_reduce, (128, 512)),
    ("rows_program (compiled circuit)", case_gate_program, (32, 64)),
    ("rows_conjugate", case_conjugate, (32, 64)),
    ("learn_clifford", case_learn, (16, 32, 64)),
]


def best_time(fn, repeat: int) -> float:
    fn()  # warm caches
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", help="also write the results here")
    args = parser.parse_args(argv)

    backends = _kernels.available_backends()
    if "compiled" not in backends:
        print("compiled kernels are not built; only the fallback can be timed")
    rows = []
    for name, make, sizes in CASES:
        for n in sizes:
            row = {"case": name, "n": n}
            for backend in backends:
                with _kernels.use_backend(backend):
                    row[backend] = best_time(make(n), args.repeat)
            if "compiled" in row:
                row["speedup"] = row["python"] / row["compiled"]
            rows.append(row)
            compiled = f"{row['compiled'] * 1e3:10.3f}" if "compiled" in row else f"{'-':>10}"
            speed = f"{row['speedup']:8.1f}x" if "speedup" in row else ""
            print(f"{name:32s} n={n:<4d} python {row['python'] * 1e3:10.3f} ms  compiled {compiled} ms {speed}")

    if args.json:
        meta = {"python": platform.python_version(), "numpy": np.__version__, "machine": platform.machine()}
        with open(args.json, "w") as fh:
            json.dump({"meta": meta, "results": rows}, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
