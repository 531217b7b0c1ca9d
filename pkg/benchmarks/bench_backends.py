#!/usr/bin/env python3
"""Benchmark the jitted factorization kernel against the pure-numpy fallback.

Both backends are imported directly (the KFK_BACKEND env flag is bypassed),
their outputs compared for bit-identity, then each is timed over the same
segments. Results print as a table; --csv-out appends machine-readable rows.

Example:
    python benchmarks/bench_backends.py --x 10000000 --repeats 3 --csv-out bench.csv
"""

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from kfk._kernels_numpy import factor_segment as numpy_kernel
from kfk.primes import base_primes_for

try:
    from kfk._kernels_numba import factor_segment as numba_kernel
except ImportError:
    numba_kernel = None

FIELDS = ("backend", "x", "segment_length", "mean_s", "std_s", "min_s", "max_s")


def segments(x, segment_length):
    lo = 1
    while lo <= x:
        hi = min(lo + segment_length, x + 1)
        yield lo, hi
        lo = hi


def run_once(kernel, x, segment_length, base_primes):
    start = time.perf_counter()
    for lo, hi in segments(x, segment_length):
        kernel(lo, hi, base_primes)
    return time.perf_counter() - start


def verify_equal(x, segment_length, base_primes):
    for lo, hi in segments(min(x, 200_000), segment_length):
        a = numba_kernel(lo, hi, base_primes)
        b = numpy_kernel(lo, hi, base_primes)
        for left, right in zip(a, b):
            if not np.array_equal(left, right):
                raise SystemExit("backend outputs differ; refusing to benchmark")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", type=int, default=10**6, help="sieve range upper end")
    ap.add_argument("--segment-length", type=int, default=2**22)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--csv-out", default=None)
    args = ap.parse_args()

    base = base_primes_for(args.x + 1)
    backends = {"numpy": numpy_kernel}
    if numba_kernel is not None:
        # warm the JIT outside the timed region
        numba_kernel(1, 1001, base_primes_for(1001))
        verify_equal(args.x, args.segment_length, base)
        backends["numba"] = numba_kernel
    else:
        print("numba not importable; benchmarking the fallback only")

    rows = []
    for name, kernel in backends.items():
        times = np.array(
            [run_once(kernel, args.x, args.segment_length, base) for _ in range(args.repeats)]
        )
        rows.append(
            (name, args.x, args.segment_length, times.mean(), times.std(), times.min(), times.max())
        )
        print(
            f"{name:>6}: mean {times.mean():.3f}s  std {times.std():.3f}s  "
            f"min {times.min():.3f}s  max {times.max():.3f}s"
        )

    if len(rows) == 2:
        print(f"speedup (numpy/numba): {rows[0][3] / rows[1][3]:.2f}x")

    if args.csv_out:
        path = Path(args.csv_out)
        new = not path.exists()
        with open(path, "a", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if new:
                writer.writerow(FIELDS)
            writer.writerows(rows)


if __name__ == "__main__":
    main()
