"""Compare the compiled and pure-Python kernels on the same workload.

Both backends must agree on every count; the script checks that and then
reports wall time per configuration and the speed-up of the compiled one.

    python benchmarks/bench_backends.py --size 256 --seeds 0-2 --queries 20
"""
import argparse
import statistics
import sys
import time

import numpy as np

from gridpath import _backend
from gridpath.bench import Config
from gridpath.blockscan import scan
from gridpath.grid import CARDINALS, gen_clustered_queries, gen_synthetic
from gridpath.search import SearchEngine


def seed_range(text):
    lo, _, hi = text.partition("-")
    return list(range(int(lo), int(hi or lo) + 1))


def time_searches(backend, grids, configs, repetitions):
    """Median total seconds per configuration over all maps and queries, plus the counts seen."""
    engines = [(SearchEngine(grid, backend), queries) for grid, queries in grids]
    times, counts = {}, {}
    for cfg in configs:
        totals = []
        for _ in range(repetitions):
            seen = []
            t0 = time.perf_counter()
            for eng, queries in engines:
                for s, t in queries:
                    m = eng.search(cfg.algo, s, t, cfg.opts).metrics
                    seen.append((m.expansions, m.insertions, m.length))
            totals.append(time.perf_counter() - t0)
        times[cfg.label] = statistics.median(totals)
        counts[cfg.label] = seen
    return times, counts


def time_scans(backend, grid, n, seed):
    rng = np.random.default_rng(seed)
    free = np.argwhere(grid.cells)
    picks = free[rng.integers(len(free), size=n)]
    dirs = rng.integers(4, size=n)
    t0 = time.perf_counter()
    for (y, x), d in zip(picks, dirs):
        scan(grid, (int(x), int(y)), CARDINALS[d], backend=backend)
    return time.perf_counter() - t0


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--size", type=int, default=256)
    p.add_argument("--b", type=float, default=0.75)
    p.add_argument("--r", type=float, default=0.01)
    p.add_argument("--seeds", type=seed_range, default=seed_range("0-1"))
    p.add_argument("--queries", type=int, default=10)
    p.add_argument("--algo", default="astar,jps,cjps,cjps-g-b")
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--scans", type=int, default=20000)
    args = p.parse_args(argv)

    if "cython" not in _backend.available():
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    configs = [Config.parse(a) for a in args.algo.split(",")]
    grids = []
    for seed in args.seeds:
        g = gen_synthetic(args.size, args.b, args.r, seed)
        grids.append((g, gen_clustered_queries(g, args.queries, seed)))
    print(f"{len(grids)} map(s) {args.size}x{args.size}, b={args.b:g}, r={args.r:g}, "
          f"{args.queries} queries each, median of {args.repetitions}")

    results = {}
    for backend in ("cython", "python"):
        results[backend] = time_searches(backend, grids, configs, args.repetitions)
    if results["cython"][1] != results["python"][1]:
        print("backends disagree on expansion counts or lengths", file=sys.stderr)
        return 1

    print(f"\n{'config':<12}{'cython s':>11}{'python s':>11}{'speed-up':>10}")
    for cfg in configs:
        c, py = results["cython"][0][cfg.label], results["python"][0][cfg.label]
        print(f"{cfg.label:<12}{c:>11.4f}{py:>11.4f}{py / c:>9.1f}x")

    g = grids[0][0]
    c = time_scans("cython", g, args.scans, 0)
    py = time_scans("python", g, args.scans, 0)
    # single scans are dominated by the Python call into the kernel
    print(f"{'scan':<12}{c:>11.4f}{py:>11.4f}{py / c:>9.1f}x   ({args.scans} random cardinal scans)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
