"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 4 8 16 32]
"""

import argparse
import timeit

import numpy as np

from gzsys import _kernels_py
from gzsys.numlin import _initial_guesses

try:
    from gzsys import _kernels as compiled
except ImportError:
    compiled = None


def cases(n, rng):
    h = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), -1)
    h[np.arange(1, n), np.arange(n - 1)] = 1
    c = np.append(rng.standard_normal(n) + 1j * rng.standard_normal(n), 1.0).astype(complex)
    polys = _kernels_py.hessenberg_charpolys(h)
    return {
        "horner": lambda mod: mod.horner(c, 0.3 + 0.2j),
        "aberth": lambda mod: mod.aberth(c, _initial_guesses(c), 500),
        "hessenberg_charpolys": lambda mod: mod.hessenberg_charpolys(h),
        "hessenberg_from_charpolys": lambda mod: mod.hessenberg_from_charpolys(polys),
    }


def best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    args = p.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; only the Python kernels are timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28}{'n':>4}{'python [us]':>14}{'compiled [us]':>15}{'speedup':>9}")
    for n in args.sizes:
        for name, call in cases(n, rng).items():
            tp = best(lambda: call(_kernels_py), args.repeat) * 1e6
            if compiled is None:
                print(f"{name:<28}{n:>4}{tp:>14.1f}{'-':>15}{'-':>9}")
                continue
            tc = best(lambda: call(compiled), args.repeat) * 1e6
            print(f"{name:<28}{n:>4}{tp:>14.1f}{tc:>15.1f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
