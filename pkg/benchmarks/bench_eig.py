"""Compare the compiled and numpy eigen-kernels on rotor-sized Hermitian matrices.

    python3 benchmarks/bench_eig.py [--sizes 65 129 257] [--repeat 3]
"""

import argparse
import time

import numpy as np

from largespin import _kernels_py

try:
    from largespin import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def solve(kern, m, vectors):
    d, e, u = kern.householder_tridiag(m, vectors)
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    z = np.eye(len(d)) if vectors else None
    kern.tql2(d, e, z)
    return d


def best_time(kern, m, vectors, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        solve(kern, m, vectors)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[33, 65, 129, 257])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    kernels = [("python", _kernels_py)] + ([("cython", _kernels_c)] if _kernels_c else [])
    print(f"{'n':>5} {'vectors':>8} " + " ".join(f"{name:>10}" for name, _ in kernels) + "   speedup")
    for n in args.sizes:
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        m = (a + a.conj().T) / 2
        for vectors in (False, True):
            ts = [best_time(k, m, vectors, args.repeat) for _, k in kernels]
            speed = f"{ts[0] / ts[1]:8.1f}x" if len(ts) > 1 else "       -"
            print(f"{n:>5} {str(vectors):>8} " + " ".join(f"{t:10.4f}" for t in ts) + "  " + speed)
    if _kernels_c is None:
        print("compiled kernels not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
