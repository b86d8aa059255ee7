#!/usr/bin/env python3
"""Benchmark the Monte Carlo kernels: numba against the numpy fallback.

Both backends produce bit-identical outcome streams; this script only
compares throughput.  Usage:

    python benchmarks/bench_backends.py [--trials 2000000] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from toolate import _kernels
from toolate.experiments import sample_protocol
from toolate.protocol import Trine
from toolate.spinlab import joint_value_probabilities


def best_of(repeats: int, fn) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"]
    if _kernels.HAS_NUMBA:
        backends.insert(0, "numba")
    else:
        print("numba not importable; timing the numpy path only")

    trine = Trine.default()
    pair_cum = _kernels.cumulative(
        np.array([joint_value_probabilities(0.0, np.pi / 4) for _ in range(4)])
    )

    jobs = {
        "protocol chain (4 stages/trial)": lambda backend: sample_protocol(
            trine, args.trials, 99, backend=backend
        ),
        "categorical rows (4x4)": lambda backend: _kernels.categorical_counts(
            pair_cum, 99, args.trials, backend=backend
        ),
    }

    print(f"trials = {args.trials:,}   best of {args.repeats}")
    print(f"{'kernel':36s} " + " ".join(f"{b:>12s}" for b in backends) + "   speedup")
    reference: dict[str, float] = {}
    for name, job in jobs.items():
        row = []
        for backend in backends:
            job(backend)  # warm up (jit compile, allocator)
            row.append(best_of(args.repeats, lambda: job(backend)))
        reference[name] = row
        cells = " ".join(f"{t * 1e3:10.1f}ms" for t in row)
        speed = f"{row[-1] / row[0]:.1f}x" if len(row) == 2 else "-"
        print(f"{name:36s} {cells}   {speed}")

    if len(backends) == 2:
        a = sample_protocol(trine, 100_000, 1234, backend="numba")
        b = sample_protocol(trine, 100_000, 1234, backend="numpy")
        print("outcome streams identical:", bool(np.array_equal(a, b)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
