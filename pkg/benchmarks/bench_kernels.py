"""Time the numba kernels against their pure-python/numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N wall time for each backend.
"""

import argparse
import time

import numpy as np

from skeincount import _accel
from skeincount._kernels import sign_change_cells
from skeincount.diagram import braid_closure
from skeincount.skein import SkeinEvaluator
from skeincount.tables import LARGE, link, random_braid_corpus


def best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_canonical(repeat):
    ds = [braid_closure(n, w) for n, w in random_braid_corpus(150, 10, seed=5)] + [link(n) for n in LARGE]

    def run(flag):
        for d in ds:
            # bypass the per-diagram cache so every call does the work
            d._cache.clear()
            d.canonical_code(use_numba=flag)
    if _accel.HAVE_NUMBA:
        run(True)  # compile
    return {flag: best(lambda: run(flag), repeat) for flag in ([True, False] if _accel.HAVE_NUMBA else [False])}


def bench_sign_cells(repeat):
    x = np.linspace(-2, 2, 400)
    X, Y = np.meshgrid(x, x, indexing="ij")
    f, g = np.sin(3 * X) * Y, np.cos(2 * Y) - X
    if _accel.HAVE_NUMBA:
        sign_change_cells(f, g, use_numba=True)
    return {flag: best(lambda: sign_change_cells(f, g, use_numba=flag), repeat)
            for flag in ([True, False] if _accel.HAVE_NUMBA else [False])}


def bench_end_to_end(repeat):
    d = link("alt12b")

    def run(flag):
        SkeinEvaluator(use_numba=flag).evaluate(d)
    if _accel.HAVE_NUMBA:
        run(True)
    return {flag: best(lambda: run(flag), repeat) for flag in ([True, False] if _accel.HAVE_NUMBA else [False])}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"backend available: {_accel.backend()}")
    for name, fn in (("canonical_code x170", bench_canonical), ("sign_change_cells 400x400", bench_sign_cells),
                     ("HOMFLYPT alt12b", bench_end_to_end)):
        res = fn(args.repeat)
        fb = res[False]
        line = f"{name:28s} fallback {fb * 1e3:9.2f} ms"
        if True in res:
            line += f"   numba {res[True] * 1e3:9.2f} ms   x{fb / res[True]:.1f}"
        print(line)


if __name__ == "__main__":
    main()
