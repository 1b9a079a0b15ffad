"""Compare the numba kernels with their numpy/Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row times one kernel on the same input through both paths and checks
that the outputs agree.  Numba compile time is excluded (one warm-up call).
"""
import argparse
import random
import time

import numpy as np

from chvatal_ip._accel import USE_NUMBA
from chvatal_ip.exactlp import _pivot
from chvatal_ip.oracle import _max_clique, _meet_graph, enumerate_downsets
from chvatal_ip.setcore import _canon_numba, _canon_numpy, _image_table


def _best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def _py(fn):
    # numba dispatchers keep the original function
    return getattr(fn, "py_func", fn)


def bench_pivot(repeat):
    rng = np.random.default_rng(0)
    m, n = 400, 127
    # entries divisible by d keep the Bareiss division exact
    d = 12
    T0 = d * rng.integers(-300, 301, size=(m + 1, n)).astype(np.int64)
    T0[5, 7] = -7 * d
    b0 = d * rng.integers(0, 500, size=m + 1).astype(np.int64)
    out = {}

    def run(kernel, key):
        T, b = T0.copy(), b0.copy()
        kernel(T, b, d, 5, 7)
        out[key] = (T, b)

    fast = _best_of(lambda: run(_pivot._pivot_int64_numba, "fast"), repeat)
    slow = _best_of(lambda: run(_pivot._pivot_numpy, "slow"), repeat)
    assert np.array_equal(out["fast"][0], out["slow"][0]) and np.array_equal(out["fast"][1], out["slow"][1])
    return "pivot 401x127 int64", fast, slow


def bench_canonical(repeat):
    table = _image_table(6)
    rng = random.Random(1)
    fams = [np.array(sorted(rng.sample(range(1, 64), 10)), dtype=np.int64) for _ in range(50)]
    res = {}

    def run(kernel, key):
        res[key] = [tuple(kernel(table, f)) for f in fams]

    fast = _best_of(lambda: run(_canon_numba, "fast"), repeat)
    slow = _best_of(lambda: run(_canon_numpy, "slow"), repeat)
    assert res["fast"] == res["slow"]
    return "canonical form n=6, 50 families", fast, slow


def bench_clique(repeat):
    graphs = []
    for d in list(enumerate_downsets(5))[::40]:
        members = [c for c in d.members if c]
        graphs.append((_meet_graph(members), len(members)))
    res = {}

    def run(kernel, key):
        res[key] = [int(kernel(a, k)[0]) for a, k in graphs]

    fast = _best_of(lambda: run(_max_clique, "fast"), repeat)
    slow = _best_of(lambda: run(_py(_max_clique), "slow"), repeat)
    assert res["fast"] == res["slow"]
    return f"max intersecting subfamily, {len(graphs)} downsets n=5", fast, slow


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not USE_NUMBA:
        print("CHVATAL_IP_BACKEND=numpy: numba kernels unavailable, nothing to compare")
        return
    print(f"{'kernel':45s} {'numba [ms]':>11s} {'fallback [ms]':>14s} {'speedup':>8s}")
    for bench in (bench_pivot, bench_canonical, bench_clique):
        name, fast, slow = bench(args.repeat)
        print(f"{name:45s} {fast * 1e3:11.3f} {slow * 1e3:14.3f} {slow / fast:7.1f}x")


if __name__ == "__main__":
    main()
