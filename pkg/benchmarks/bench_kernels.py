"""Time the compiled hinge-SGD kernel against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--rows 766] [--epochs 200] [--repeats 3]

The default workload is one single-feature training run on a 70% split of
1,096 balanced rows, the unit of work repeated 1,000 times by a full
100-experiment, 10-attribute study.
"""
import argparse
import time

import numpy as np

from roughrank import _kernels_py

try:
    from roughrank import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=766)
    ap.add_argument("--features", type=int, default=1)
    ap.add_argument("--epochs", type=int, default=200)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    X = rng.integers(0, 7, (args.rows, args.features)).astype(np.float64)
    y = np.where(X[:, 0] + rng.normal(0, 2, args.rows) > 3, 1.0, -1.0)

    def run(mod):
        return lambda: mod.hinge_sgd(X, y, args.epochs, 0.01, 0.01)

    t_py, (w_py, b_py) = best_of(run(_kernels_py), args.repeats)
    print(f"workload: {args.rows} rows x {args.features} feature(s) x {args.epochs} epochs")
    print(f"python    {t_py * 1e3:10.2f} ms")
    if compiled is None:
        print("compiled  not built (install with Cython available)")
        return 0
    t_c, (w_c, b_c) = best_of(run(compiled), max(args.repeats, 10))
    same = w_c.tobytes() == w_py.tobytes() and b_c == b_py
    print(f"compiled  {t_c * 1e3:10.2f} ms")
    print(f"speedup   {t_py / t_c:10.1f}x")
    print(f"bit-identical results: {same}")
    per_study = 1000 * t_c
    print(f"projected 100-experiment x 10-attribute study: {per_study:.1f} s compiled, "
          f"{1000 * t_py:.0f} s python")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
