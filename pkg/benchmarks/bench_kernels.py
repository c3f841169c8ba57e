"""Compare the compiled and pure-Python kernels on representative workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat R]
"""
from __future__ import annotations

import argparse
import random
import time

from boxfree import _backend
from boxfree import _pykernels as py


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    rng = random.Random(0)
    zero_sets = [[rng.getrandbits(24) for _ in range(24)] for _ in range(200)]
    supports = [[rng.getrandbits(12) | (1 << rng.randrange(12)) for _ in range(14)] for _ in range(50)]
    return {
        "kset_search 24x24 k=8 (x200)": lambda m: [m.kset_search(z, (1 << 24) - 1, 8, 8) for z in zero_sets],
        "surplus_violation 14 rows c=1 (x50)": lambda m: [m.surplus_violation(s, 1, 11) for s in supports],
        "row_search alpha(3,7) t=15 refute": lambda m: m.row_search(7, 3, 15),
        "row_search alpha(4,9) t=20 all": lambda m: m.row_search(9, 4, 20, find_all=True),
        "row_search alpha(5,11) t=22 refute": lambda m: m.row_search(11, 5, 22),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    compiled = _backend.compiled
    print(f"active backend: {_backend.BACKEND}")
    print(f"{'workload':<40} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in workloads().items():
        tp = _time(lambda: fn(py), args.repeat)
        if compiled is None:
            print(f"{name:<40} {tp:>10.4f} {'-':>10} {'-':>8}")
            continue
        if fn(py) != fn(compiled):
            raise SystemExit(f"backends disagree on {name}")
        tc = _time(lambda: fn(compiled), args.repeat)
        print(f"{name:<40} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
