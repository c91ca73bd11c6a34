"""Benchmark the two hit-and-run step kernels against each other.

Runs the same sampling workloads under the compiled (Cython) kernel and
the pure-numpy fallback, reporting throughput and the speedup, plus a
statistical cross-check: per-coordinate means of the two chains must
agree within a few batch-mean standard errors (the trajectories
themselves diverge -- floating-point rounding differences compound
exponentially along a chaotic walk -- so only distributional agreement
is meaningful over long runs).

Usage:
    python benchmarks/bench_sampler.py [--samples N] [--burn-in N] [--seed N]
"""

import argparse
import sys
import time

import numpy as np

import threshgen as tg
from threshgen import sampling
from threshgen import _hitrun_py

try:
    from threshgen import _hitrun
except ImportError:
    _hitrun = None

WORKLOADS = (
    (
        "single rule, 1 name (dim 2)",
        "t => a @ 1\n",
        0.1,
    ),
    (
        "two-rule chain, 2 names (dim 4)",
        "t => a @ 1\n~a => b @ 1\n",
        0.1,
    ),
    (
        "three rules, 3 names (dim 8)",
        "t => a @ 1\na => b @ 2\na & b => c @ 1\n",
        0.2,
    ),
)


def build_system(rules_text, delta):
    kb = tg.load_kb(rules_text)
    params = tg.ParameterAssignment(psi=(1.0,) * kb.size, delta=delta)
    return tg.build_polytope(kb, params)


def run_backend(kernel, system, n, burn_in, seed):
    """Sample under the given kernel, returning (seconds, points)."""
    previous = sampling._KERNEL
    sampling._KERNEL = kernel
    try:
        start = time.perf_counter()
        sample = tg.sample_uniform(system, n, burn_in=burn_in, seed=seed)
        elapsed = time.perf_counter() - start
    finally:
        sampling._KERNEL = previous
    return elapsed, sample.points


def batch_mean_se(values, batches=100):
    usable = len(values) - len(values) % batches
    means = values[:usable].reshape(batches, -1).mean(axis=1)
    return means.std(ddof=1) / np.sqrt(batches)


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="compare the compiled and pure hit-and-run kernels"
    )
    parser.add_argument(
        "--samples", type=int, default=100_000, help="points per workload"
    )
    parser.add_argument(
        "--burn-in", type=int, default=1000, help="discarded warmup steps"
    )
    parser.add_argument("--seed", type=int, default=0, help="chain seed")
    args = parser.parse_args(argv)

    if _hitrun is None:
        print("compiled kernel unavailable; benchmarking the pure kernel only")
    kernels = [("pure", _hitrun_py)]
    if _hitrun is not None:
        kernels.insert(0, ("compiled", _hitrun))

    width = max(len(label) for label, _, _ in WORKLOADS)
    steps = args.samples + args.burn_in
    worst_ratio = 0.0
    for label, rules_text, delta in WORKLOADS:
        system = build_system(rules_text, delta)
        results = {}
        for name, kernel in kernels:
            elapsed, points = run_backend(
                kernel, system, args.samples, args.burn_in, args.seed
            )
            results[name] = (elapsed, points)
            rate = steps / elapsed
            print(
                f"{label:<{width}}  {name:>8}: "
                f"{elapsed * 1e3:8.1f} ms  ({rate / 1e6:6.2f} M steps/s)"
            )
        if len(results) == 2:
            fast, slow = results["compiled"][0], results["pure"][0]
            print(f"{label:<{width}}  {'speedup':>8}: {slow / fast:8.1f}x")
            for column in range(system.dimension):
                compiled_col = results["compiled"][1][:, column]
                pure_col = results["pure"][1][:, column]
                gap = abs(compiled_col.mean() - pure_col.mean())
                scale = max(
                    batch_mean_se(compiled_col), batch_mean_se(pure_col), 1e-15
                )
                worst_ratio = max(worst_ratio, gap / scale)
        print()

    if len(kernels) == 2:
        agree = worst_ratio <= 6.0
        print(
            f"distribution agreement: worst column-mean gap ="
            f" {worst_ratio:.2f} standard errors"
            f" ({'OK' if agree else 'DISAGREEMENT'})"
        )
        return 0 if agree else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())