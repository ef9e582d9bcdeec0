"""Time the versioned-knapsack DP table: numba kernel against the numpy path.

    python benchmarks/bench_kvip.py --items 200 --capacity 5000 --versions 10

Both backends are called directly, so the environment flag does not matter
here. The first numba call (compilation, or a cache load) is timed on its own.
"""
import argparse
import time

import numpy as np

from procalloc import _kernels


def random_arrays(rng, items, versions, capacity):
    counts = rng.integers(1, versions + 1, size=items)
    offsets = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    weights = rng.integers(1, max(2, capacity // 10), size=offsets[-1]).astype(np.int64)
    values = rng.uniform(0, 100, size=offsets[-1])
    return offsets, weights, values


def best_of(fn, repeats):
    times = []
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--items", type=int, default=200)
    ap.add_argument("--capacity", type=int, default=5000)
    ap.add_argument("--versions", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    offsets, weights, values = random_arrays(rng, args.items, args.versions, args.capacity)
    call = (offsets, weights, values, args.capacity)
    print(f"items={args.items} versions<={args.versions} capacity={args.capacity} "
          f"total versions={len(weights)}")

    t_np, g_np = best_of(lambda: _kernels.suffix_table_numpy(*call), args.repeats)
    print(f"numpy      {t_np * 1e3:10.1f} ms")
    if _kernels.suffix_table_numba is None:
        print("numba      not installed")
        return 0

    t0 = time.perf_counter()
    _kernels.suffix_table_numba(*call)
    print(f"numba 1st  {(time.perf_counter() - t0) * 1e3:10.1f} ms (compile or cache load)")
    t_nb, g_nb = best_of(lambda: _kernels.suffix_table_numba(*call), args.repeats)
    print(f"numba      {t_nb * 1e3:10.1f} ms")
    print(f"speedup    {t_np / t_nb:10.2f}x")
    print(f"identical  {g_np.tobytes() == g_nb.tobytes()}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
