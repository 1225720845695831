"""Compare the numba and numpy paths of the evaluation kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from wdcop import _kernels
from wdcop.spaces import DiskGrid


def best_time(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels.numba is None:
        print("numba is not installed; only the numpy path is available")
        return
    rng = np.random.default_rng(0)
    z = DiskGrid(16, 1024).points()
    w = np.maximum(1.0 - np.abs(z) ** 2, 0.0)
    print(f"{'kernel':28s} {'degree':>7s} {'points':>8s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for deg in (16, 128, 1024):
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        cases = [
            ("horner", lambda u: _kernels.horner(c, z, use_numba=u)),
            ("horner_derivative k=3", lambda u: _kernels.horner_derivative(c, z, 3, use_numba=u)),
        ]
        vals = _kernels.horner(c, z, use_numba=False)
        cases.append(("weighted_abs_max", lambda u: _kernels.weighted_abs_max(vals, w, use_numba=u)))
        for name, fn in cases:
            a = fn(False)
            b = fn(True)
            same = np.allclose(np.asarray(a[0] if isinstance(a, tuple) else a),
                               np.asarray(b[0] if isinstance(b, tuple) else b), rtol=1e-10, atol=1e-12)
            tn = best_time(lambda: fn(False), args.repeat)
            tj = best_time(lambda: fn(True), args.repeat)
            flag = "" if same else "  (results differ)"
            print(f"{name:28s} {deg:7d} {z.size:8d} {tn:10.4f} {tj:10.4f} {tn / tj:8.2f}{flag}")


if __name__ == "__main__":
    main()
