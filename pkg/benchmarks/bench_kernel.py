"""Time the compiled and pure-Python eigen-trajectory kernels on the same orbits.

    python benchmarks/bench_kernel.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from cqhm import kernel

ORBITS = [
    ("H1 n=0 circle", 1, 0, 0, 1.0),
    ("H1 n=1 omega3", 1, 0, 1, 3.0),
    ("H5 n=1", 1j, 0.5j, 1, -0.5 + 0.3j),
    ("H6 n=3", 2, 2, 3, 0.2 + 0.5j),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--t-end", type=float, default=50.0)
    ap.add_argument("--tolerance", type=float, default=1e-10)
    args = ap.parse_args()

    try:
        from cqhm._kernel import eigen_flow as compiled
    except ImportError:
        compiled = None
        print("compiled kernel not built; timing the Python backend only")

    tol = args.tolerance
    print(f"{'orbit':<16}{'steps':>8}{'python ms':>12}{'cython ms':>12}{'speedup':>9}{'max |dx|':>11}")
    for label, a, b, n, x0 in ORBITS:
        def run_py():
            return kernel.python_eigen_flow(a, b, n, x0, args.t_end, tol, tol)
        py = min(timeit.repeat(run_py, number=1, repeat=args.repeat)) * 1e3
        t, x, _ = run_py()
        if compiled is None:
            print(f"{label:<16}{len(t):>8}{py:>12.2f}")
            continue

        def run_c():
            return compiled(a, b, n, x0, args.t_end, tol, tol)
        cy = min(timeit.repeat(run_c, number=1, repeat=args.repeat)) * 1e3
        diff = np.max(np.abs(run_c()[1] - x))
        print(f"{label:<16}{len(t):>8}{py:>12.2f}{cy:>12.3f}{py / cy:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
