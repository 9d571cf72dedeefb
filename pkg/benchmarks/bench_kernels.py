"""Benchmark the numba kernels against the pure-numpy fallback.

Times each hot kernel on pipeline-shaped workloads with both backends, plus
one end-to-end benchmark trial (direct oracle + both quantized pipelines).
Wall-clock best-of-repeats; a warmup pass absorbs JIT compilation.

Usage:
    python benchmarks/bench_kernels.py [--repeats N]

The package picks its backend once at import from WINOLEG_BACKEND ("numpy"
forces the fallback); this script swaps implementations in process to time
both sides.
"""

import argparse
import time

import numpy as np

import winoleg
from winoleg import _kernels

KERNEL_NAMES = ("conv2d_direct_f64", "sandwich", "hadamard_accumulate")


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_workloads(rng):
    # shapes matching an F(4,3) layer step: 32x32 input, 16->16 channels
    x = rng.standard_normal((16, 32, 32))
    w = rng.standard_normal((16, 16, 3, 3))
    bt = rng.standard_normal((6, 6))
    tiles = rng.standard_normal((16 * 64, 6, 6))
    u = rng.standard_normal((16, 16, 6, 6))
    v = rng.standard_normal((16, 64, 6, 6))
    return [
        ("conv2d_direct_f64", lambda impl: impl(x, w)),
        ("sandwich", lambda impl: impl(bt, tiles, bt.T.copy())),
        ("hadamard_accumulate", lambda impl: impl(u, v)),
    ]


def bench_trial(rng):
    plan = winoleg.plan_to_float(winoleg.build_plan(4, 3, use_legendre=True))
    x = rng.standard_normal((8, 32, 32))
    w = rng.standard_normal((8, 8, 3, 3))
    qc = winoleg.QuantConfig.uniform(8)

    def run():
        winoleg.conv2d_direct(x, w)
        winoleg.conv2d_winograd_quantized(x, w, plan, "canonical", qc)
        winoleg.conv2d_winograd_quantized(x, w, plan, "legendre", qc)

    return run


def use_backend(name):
    for kernel in KERNEL_NAMES:
        setattr(_kernels, kernel, _kernels.get_impls(name)[kernel])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if "numba" not in _kernels.available_backends():
        print("numba unavailable; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'workload':<24s} {'numpy':>12s} {'numba':>12s} {'speedup':>9s}")
    for name, call in kernel_workloads(rng):
        results = {}
        for backend in ("numpy", "numba"):
            impl = _kernels.get_impls(backend)[name]
            out = call(impl)  # warmup (and JIT for numba)
            results[backend] = (best_of(lambda: call(impl), args.repeats), out)
        t_np, out_np = results["numpy"]
        t_nb, out_nb = results["numba"]
        if not np.allclose(out_np, out_nb, rtol=1e-11, atol=1e-12):
            raise AssertionError(f"{name}: backend outputs disagree")
        print(f"{name:<24s} {t_np * 1e3:>10.3f}ms {t_nb * 1e3:>10.3f}ms "
              f"{t_np / t_nb:>8.1f}x")

    trial = bench_trial(rng)
    timings = {}
    try:
        for backend in ("numpy", "numba"):
            use_backend(backend)
            trial()  # warmup
            timings[backend] = best_of(trial, args.repeats)
    finally:
        use_backend(_kernels.BACKEND)
    print(f"{'benchmark trial (e2e)':<24s} {timings['numpy'] * 1e3:>10.3f}ms "
          f"{timings['numba'] * 1e3:>10.3f}ms "
          f"{timings['numpy'] / timings['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
