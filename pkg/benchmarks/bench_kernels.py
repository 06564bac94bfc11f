"""Time the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--sizes 16,64,128]

Both backends are called directly, so the env flag does not matter here.
The first numba call (compilation, or cache load) is excluded from timing.
"""
import argparse
import time

import numpy as np

from sr1r import kernels
from sr1r.matrix import from_spectrum, random_unitary
from sr1r.precoding import QamConstellation


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(n, rng):
    a = from_spectrum(np.logspace(3, -1, n), random_unitary(n, rng))
    sched = kernels.round_robin_schedule(n)
    t = np.tril(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), -1) * 0.1 + 2 * np.eye(n)
    pts = QamConstellation(16).points
    y = (rng.standard_normal(n * 1000) + 1j * rng.standard_normal(n * 1000)) * 0.8
    return {
        "jacobi_sweeps": lambda impl: impl.jacobi_sweeps(a.copy(), sched, 50, 1e-14),
        "lower_tri_inverse": lambda impl: impl.lower_tri_inverse(t),
        "qam_nearest": lambda impl: impl.qam_nearest(y, pts),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--sizes", default="16,64,128")
    args = ap.parse_args()
    if kernels.numba_impl is None:
        raise SystemExit("numba is unavailable or disabled; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18} {'n':>5} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, call in cases(n, rng).items():
            t_np = best_of(lambda: call(kernels.numpy_impl), args.repeat)
            t_nb = best_of(lambda: call(kernels.numba_impl), args.repeat)
            print(f"{name:<18} {n:>5} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
