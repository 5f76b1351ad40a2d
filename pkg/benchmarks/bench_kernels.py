"""Time the numba and numpy variants of each hot kernel side by side.

    python3 benchmarks/bench_kernels.py [--repeat N]

The numba variants are compiled once before timing. With
MOMENTSHARP_DISABLE_NUMBA=1 the "numba" column runs the same loop bodies as
plain Python, which shows what the JIT buys.
"""

import argparse
import timeit

import numpy as np

from momentsharp import _accel, kernels
from momentsharp.partitions import enumerate_partitions

CASES = [
    ("dominance_matrix d=16", lambda v: v(np.array(enumerate_partitions(16)))),
    ("dominance_matrix d=20", lambda v: v(np.array(enumerate_partitions(20)))),
    ("power_sum_census d=4 p=11", lambda v: v(4, 11)),
    ("power_sum_census d=5 p=7", lambda v: v(5, 7)),
    ("split_patterns d=4 p=11", lambda v: v(4, 11)),
    ("split_patterns d=5 p=7", lambda v: v(5, 7)),
]

VARIANTS = {
    "dominance_matrix": (kernels.dominance_matrix_numpy, kernels.dominance_matrix_numba),
    "power_sum_census": (kernels.power_sum_census_numpy, kernels.power_sum_census_numba),
    "split_patterns": (kernels.split_patterns_numpy, kernels.split_patterns_numba),
}


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"backend: {_accel.backend()}")
    print(f"{'kernel':30s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for label, call in CASES:
        np_fn, nb_fn = VARIANTS[label.split()[0]]
        a, b = call(np_fn), call(nb_fn)
        assert np.array_equal(a, b), f"{label}: variants disagree"
        t_np = best_of(lambda: call(np_fn), args.repeat)
        t_nb = best_of(lambda: call(nb_fn), args.repeat)
        print(f"{label:30s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
