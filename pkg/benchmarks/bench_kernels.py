#!/usr/bin/env python3
"""Compare the pure-Python and compiled reachability kernels.

Times transitive closure and reduction over batches of random DAGs at a
few sizes, plus one end-to-end verification workload through whichever
backend `causalrnr.kernels` selected.

    python benchmarks/bench_kernels.py
    CAUSAL_RNR_PURE=1 python benchmarks/bench_kernels.py   # force pure
"""

import random
import time

from causalrnr import _pykernels, kernels

try:
    from causalrnr import _fastkernels
except ImportError:
    _fastkernels = None


def random_dag_rows(rng, n, density):
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                rows[i] |= 1 << j
    return rows


def bench_backend(impl, batches, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for rows in batches:
            closed = impl.closure_rows(rows)
            impl.reduction_rows(closed)
            impl.has_cycle_rows(rows)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels():
    rng = random.Random(2024)
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'n':>4} {'batch':>6} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for n, batch in ((8, 3000), (16, 2000), (32, 800), (64, 300)):
        batches = [random_dag_rows(rng, n, 0.3) for _ in range(batch)]
        py = bench_backend(_pykernels, batches)
        if _fastkernels is None:
            print(f"{n:>4} {batch:>6} {py:>9.3f}s {'n/a':>10} {'n/a':>8}")
            continue
        cy = bench_backend(_fastkernels, batches)
        print(f"{n:>4} {batch:>6} {py:>9.3f}s {cy:>9.3f}s {py / cy:>7.1f}x")


def bench_verification():
    from causalrnr import oracle
    from causalrnr.generator import GenParams, gen_strong_causal
    from causalrnr.race_record import minimal_race_record
    from causalrnr.view_record import minimal_view_record

    fixtures = []
    seed = 0
    while len(fixtures) < 60:
        execution, views = gen_strong_causal(
            GenParams(seed=seed, processes=3, ops_per_process=2, variables=1,
                      write_ratio=1.0)
        )
        if len(execution.program.all_ops) <= 6:
            fixtures.append((execution, views))
        seed += 1
    start = time.perf_counter()
    for execution, views in fixtures:
        record = minimal_view_record(views, execution)
        assert oracle.is_good_view_record(views, execution.program, record).good
        record2 = minimal_race_record(views, execution)
        assert oracle.is_good_race_record(views, execution.program, record2).good
    elapsed = time.perf_counter() - start
    print(f"verification workload ({len(fixtures)} fixtures, backend "
          f"{kernels.BACKEND}): {elapsed:.3f}s")


if __name__ == "__main__":
    bench_kernels()
    bench_verification()
