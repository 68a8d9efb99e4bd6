"""Compare the compiled window-moments kernel against the pure NumPy/SciPy
fallback: numerical agreement first, then wall-clock timings.

Run as: python3 benchmarks/bench_kernels.py [--size 1024] [--window 5]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np


def _load_backends():
    from holoqa._kernels import pure

    try:
        compiled = importlib.import_module("holoqa._kernels._window")
    except ImportError:
        compiled = None
    return compiled, pure


def _time(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=1024)
    parser.add_argument("--window", type=int, default=5)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    compiled, pure = _load_backends()
    rng = np.random.default_rng(7)
    img = rng.uniform(0.0, 255.0, (args.size, args.size))

    if compiled is None:
        print("compiled backend unavailable; timing the pure backend only")
        t = _time(pure.local_moments, img, args.window, args.window,
                  repeats=args.repeats)
        print(f"pure     {t * 1e3:8.2f} ms")
        return 0

    mean_c, var_c = compiled.local_moments(img, args.window, args.window)
    mean_p, var_p = pure.local_moments(img, args.window, args.window)
    dm = float(np.max(np.abs(mean_c - mean_p)))
    dv = float(np.max(np.abs(var_c - var_p)))
    print(f"max |mean diff| = {dm:.3e}, max |var diff| = {dv:.3e}")
    assert dm < 1e-8 and dv < 1e-8, "backends disagree beyond roundoff"

    tc = _time(compiled.local_moments, img, args.window, args.window,
               repeats=args.repeats)
    tp = _time(pure.local_moments, img, args.window, args.window,
               repeats=args.repeats)
    print(f"compiled {tc * 1e3:8.2f} ms")
    print(f"pure     {tp * 1e3:8.2f} ms")
    print(f"speedup  {tp / tc:8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
